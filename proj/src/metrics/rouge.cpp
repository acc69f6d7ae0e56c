#include "divref/metrics/rouge.hpp"

#include <algorithm>

#include "divref/error.hpp"
#include "divref/metrics/ngram.hpp"

namespace divref::metrics {
namespace {

double f1(std::uint64_t overlap, std::uint64_t hyp_total, std::uint64_t ref_total) {
  if (overlap == 0 || hyp_total == 0 || ref_total == 0) return 0.0;
  const double p = static_cast<double>(overlap) / static_cast<double>(hyp_total);
  const double r = static_cast<double>(overlap) / static_cast<double>(ref_total);
  return 2.0 * p * r / (p + r);
}

MetricScore collect(MetricId id, std::vector<double> per_ref) {
  MetricScore score;
  score.metric_id = id;
  score.value = *std::max_element(per_ref.begin(), per_ref.end());
  score.aggregation_used = per_ref.size() == 1 ? Aggregation::single : Aggregation::max;
  score.per_reference = std::move(per_ref);
  return score;
}

}  // namespace

double rouge_n_tokens(std::span<const std::string> hyp, std::span<const std::string> ref, int n) {
  Vocabulary vocab;
  NGramIndexer indexer(n);
  const auto h = indexer.index(vocab.ids(hyp));
  const auto r = indexer.index(vocab.ids(ref));
  const auto width = indexer.distinct(n);
  const auto hp = make_profile(h, n, width);
  const auto rp = make_profile(r, n, width);
  return f1(clipped_matches(hp, rp), hp.total, rp.total);
}

std::size_t lcs_length(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  if (a.empty() || b.empty()) return 0;
  if (b.size() > a.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t diag = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::size_t up = row[j + 1];
      row[j + 1] = a[i] == b[j] ? diag + 1 : std::max(up, row[j]);
      diag = up;
    }
  }
  return row[b.size()];
}

double rouge_l_tokens(std::span<const std::string> hyp, std::span<const std::string> ref) {
  Vocabulary vocab;
  const auto h = vocab.ids(hyp);
  const auto r = vocab.ids(ref);
  return f1(lcs_length(h, r), h.size(), r.size());
}

MetricScore rouge_n(std::string_view hypothesis, std::span<const std::string> references, int n,
                    const RougeParams& params) {
  if (references.empty()) throw UsageError("ROUGE requires at least one reference");
  if (n < 1) throw UsageError("ROUGE-n requires n >= 1");
  const auto hyp = tokenize(hypothesis, params.tokenizer);
  std::vector<double> per_ref;
  for (const auto& r : references) per_ref.push_back(rouge_n_tokens(hyp, tokenize(r, params.tokenizer), n));
  return collect(n == 1 ? MetricId::rouge1 : MetricId::rouge2, std::move(per_ref));
}

MetricScore rouge_l(std::string_view hypothesis, std::span<const std::string> references, const RougeParams& params) {
  if (references.empty()) throw UsageError("ROUGE requires at least one reference");
  const auto hyp = tokenize(hypothesis, params.tokenizer);
  std::vector<double> per_ref;
  for (const auto& r : references) per_ref.push_back(rouge_l_tokens(hyp, tokenize(r, params.tokenizer)));
  return collect(MetricId::rougeL, std::move(per_ref));
}

}  // namespace divref::metrics
