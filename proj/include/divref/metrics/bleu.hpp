#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divref/metrics/metric.hpp"

namespace divref::metrics {

// Sufficient statistics of sentence BLEU for one hypothesis. matches[k] is
// the clipped count of (k+1)-grams, totals[k] the hypothesis (k+1)-gram count.
struct BleuStats {
  std::vector<std::uint64_t> matches;
  std::vector<std::uint64_t> totals;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
};

// Multi-reference statistics: clipping uses the per-n-gram maximum count
// over references; ref_len is the reference length closest to the
// hypothesis length (ties go to the shorter).
BleuStats bleu_statistics(std::span<const std::string> hyp_tokens,
                          std::span<const std::vector<std::string>> ref_tokens, int max_order = 4);

// Geometric mean of precisions with exponential smoothing of zero-match
// orders and effective order, times brevity penalty. In [0,1].
double bleu_from_statistics(const BleuStats& stats);

// Built-in multi-reference BLEU when refs.size() > 1. Throws UsageError for
// an empty reference list.
MetricScore sentence_bleu(std::string_view hypothesis, std::span<const std::string> references,
                          const BleuParams& params = {});

// One single-reference BLEU per reference, hypothesis tokenized once.
std::vector<double> sentence_bleu_per_reference(std::string_view hypothesis, std::span<const std::string> references,
                                                const BleuParams& params = {});

}  // namespace divref::metrics
