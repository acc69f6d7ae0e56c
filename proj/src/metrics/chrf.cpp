#include "divref/metrics/chrf.hpp"

#include <algorithm>

#include "divref/error.hpp"
#include "divref/metrics/ngram.hpp"
#include "divref/text/unicode.hpp"

namespace divref::metrics {

std::vector<std::uint32_t> chrf_symbols(std::string_view text, bool lowercase) {
  const std::string normalized = lowercase ? text::lowercase(text::nfc(text)) : text::nfc(text);
  std::vector<std::uint32_t> out;
  for (char32_t cp : text::decode_utf8(normalized)) {
    if (!text::is_whitespace(cp)) out.push_back(static_cast<std::uint32_t>(cp));
  }
  return out;
}

double chrf_from_statistics(const ChrfStats& stats, double beta) {
  const double factor = beta * beta;
  double avg_prec = 0.0;
  double avg_rec = 0.0;
  std::size_t effective = 0;
  for (std::size_t k = 0; k < stats.hyp.size(); ++k) {
    if (stats.hyp[k] == 0 || stats.ref[k] == 0) continue;
    avg_prec += static_cast<double>(stats.match[k]) / static_cast<double>(stats.hyp[k]);
    avg_rec += static_cast<double>(stats.match[k]) / static_cast<double>(stats.ref[k]);
    ++effective;
  }
  if (effective == 0) return 0.0;
  avg_prec /= static_cast<double>(effective);
  avg_rec /= static_cast<double>(effective);
  if (avg_prec + avg_rec == 0.0) return 0.0;
  return 100.0 * (1.0 + factor) * avg_prec * avg_rec / (factor * avg_prec + avg_rec);
}

std::vector<double> chrf_per_reference(std::string_view hypothesis, std::span<const std::string> references,
                                       const ChrfParams& params) {
  if (references.empty()) throw UsageError("ChrF requires at least one reference");
  NGramIndexer indexer(params.char_order);
  const auto hyp = indexer.index(chrf_symbols(hypothesis, params.lowercase));
  std::vector<IndexedSequence> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back(indexer.index(chrf_symbols(r, params.lowercase)));

  const auto order = static_cast<std::size_t>(params.char_order);
  std::vector<NGramProfile> hyp_profiles;
  for (int k = 1; k <= params.char_order; ++k) hyp_profiles.push_back(make_profile(hyp, k, indexer.distinct(k)));

  std::vector<double> out;
  out.reserve(refs.size());
  for (const auto& ref : refs) {
    ChrfStats stats{std::vector<std::uint64_t>(order), std::vector<std::uint64_t>(order),
                    std::vector<std::uint64_t>(order)};
    for (int k = 1; k <= params.char_order; ++k) {
      const auto idx = static_cast<std::size_t>(k - 1);
      const auto ref_profile = make_profile(ref, k, indexer.distinct(k));
      stats.hyp[idx] = hyp_profiles[idx].total;
      stats.ref[idx] = ref_profile.total;
      stats.match[idx] = clipped_matches(hyp_profiles[idx], ref_profile);
    }
    out.push_back(chrf_from_statistics(stats, params.beta));
  }
  return out;
}

MetricScore chrf(std::string_view hypothesis, std::span<const std::string> references, const ChrfParams& params) {
  MetricScore score;
  score.metric_id = MetricId::chrf;
  score.per_reference = chrf_per_reference(hypothesis, references, params);
  score.value = *std::max_element(score.per_reference.begin(), score.per_reference.end());
  score.aggregation_used = references.size() == 1 ? Aggregation::single : Aggregation::builtin;
  return score;
}

}  // namespace divref::metrics
