#include "divref/metrics/bleu.hpp"

#include <cmath>
#include <cstdlib>

#include "divref/error.hpp"
#include "divref/metrics/ngram.hpp"

namespace divref::metrics {
namespace {

std::size_t closest_ref_len(std::size_t hyp_len, std::span<const std::size_t> ref_lens) {
  std::size_t best = ref_lens.front();
  auto dist = [&](std::size_t r) { return r > hyp_len ? r - hyp_len : hyp_len - r; };
  for (auto r : ref_lens) {
    if (dist(r) < dist(best) || (dist(r) == dist(best) && r < best)) best = r;
  }
  return best;
}

struct IndexedCall {
  NGramIndexer indexer;
  IndexedSequence hyp;
  std::vector<IndexedSequence> refs;
};

IndexedCall index_call(std::span<const std::string> hyp_tokens, std::span<const std::vector<std::string>> ref_tokens,
                       int max_order) {
  Vocabulary vocab;
  IndexedCall call{NGramIndexer(max_order), {}, {}};
  const auto hyp_ids = vocab.ids(hyp_tokens);
  call.hyp = call.indexer.index(hyp_ids);
  call.refs.reserve(ref_tokens.size());
  for (const auto& r : ref_tokens) {
    const auto ids = vocab.ids(r);
    call.refs.push_back(call.indexer.index(ids));
  }
  return call;
}

BleuStats stats_against(const IndexedCall& call, std::span<const std::size_t> ref_indices, int max_order) {
  BleuStats stats;
  stats.matches.assign(static_cast<std::size_t>(max_order), 0);
  stats.totals.assign(static_cast<std::size_t>(max_order), 0);
  stats.hyp_len = call.hyp.length;
  std::vector<std::size_t> lens;
  for (auto r : ref_indices) lens.push_back(call.refs[r].length);
  stats.ref_len = closest_ref_len(stats.hyp_len, lens);
  std::vector<NGramProfile> profiles;
  for (int k = 1; k <= max_order; ++k) {
    const std::size_t width = call.indexer.distinct(k);
    const auto hyp = make_profile(call.hyp, k, width);
    stats.totals[static_cast<std::size_t>(k - 1)] = hyp.total;
    if (hyp.total == 0) continue;
    profiles.clear();
    for (auto r : ref_indices) profiles.push_back(make_profile(call.refs[r], k, width));
    const auto clip = profiles.size() == 1 ? profiles.front() : max_profile(profiles);
    stats.matches[static_cast<std::size_t>(k - 1)] = clipped_matches(hyp, clip);
  }
  return stats;
}

void require_refs(std::span<const std::string> references) {
  if (references.empty()) throw UsageError("BLEU requires at least one reference");
}

}  // namespace

BleuStats bleu_statistics(std::span<const std::string> hyp_tokens, std::span<const std::vector<std::string>> ref_tokens,
                          int max_order) {
  if (ref_tokens.empty()) throw UsageError("BLEU requires at least one reference");
  const auto call = index_call(hyp_tokens, ref_tokens, max_order);
  std::vector<std::size_t> all(ref_tokens.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return stats_against(call, all, max_order);
}

double bleu_from_statistics(const BleuStats& stats) {
  if (stats.hyp_len == 0) return 0.0;
  double smooth = 1.0;
  double log_sum = 0.0;
  std::size_t effective_order = 0;
  for (std::size_t k = 0; k < stats.totals.size(); ++k) {
    if (stats.totals[k] == 0) break;
    effective_order = k + 1;
    double precision;
    if (stats.matches[k] == 0) {
      smooth *= 2.0;
      precision = 1.0 / (smooth * static_cast<double>(stats.totals[k]));
    } else {
      precision = static_cast<double>(stats.matches[k]) / static_cast<double>(stats.totals[k]);
    }
    log_sum += std::log(precision);
  }
  const double bp = stats.hyp_len < stats.ref_len
                        ? std::exp(1.0 - static_cast<double>(stats.ref_len) / static_cast<double>(stats.hyp_len))
                        : 1.0;
  const double score = bp * std::exp(log_sum / static_cast<double>(effective_order));
  return score > 1.0 ? 1.0 : score;
}

MetricScore sentence_bleu(std::string_view hypothesis, std::span<const std::string> references,
                          const BleuParams& params) {
  require_refs(references);
  const auto hyp = tokenize(hypothesis, params.tokenizer);
  std::vector<std::vector<std::string>> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back(tokenize(r, params.tokenizer));
  MetricScore score;
  score.metric_id = MetricId::bleu;
  score.value = bleu_from_statistics(bleu_statistics(hyp, refs, params.max_order));
  score.aggregation_used = references.size() == 1 ? Aggregation::single : Aggregation::builtin;
  return score;
}

std::vector<double> sentence_bleu_per_reference(std::string_view hypothesis, std::span<const std::string> references,
                                                const BleuParams& params) {
  require_refs(references);
  const auto hyp = tokenize(hypothesis, params.tokenizer);
  std::vector<std::vector<std::string>> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back(tokenize(r, params.tokenizer));
  const auto call = index_call(hyp, refs, params.max_order);
  std::vector<double> out;
  out.reserve(refs.size());
  for (std::size_t r = 0; r < refs.size(); ++r) {
    const std::size_t one[] = {r};
    out.push_back(bleu_from_statistics(stats_against(call, one, params.max_order)));
  }
  return out;
}

}  // namespace divref::metrics
