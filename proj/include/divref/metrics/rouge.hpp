#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divref/metrics/metric.hpp"

namespace divref::metrics {

// F1 of clipped n-gram overlap; 0 when either side has no n-grams.
double rouge_n_tokens(std::span<const std::string> hyp, std::span<const std::string> ref, int n);
// F1 from the longest common subsequence length.
double rouge_l_tokens(std::span<const std::string> hyp, std::span<const std::string> ref);
std::size_t lcs_length(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

// per_reference holds one score per reference; value is their maximum
// (aggregation == single for one reference).
MetricScore rouge_n(std::string_view hypothesis, std::span<const std::string> references, int n,
                    const RougeParams& params = {});
MetricScore rouge_l(std::string_view hypothesis, std::span<const std::string> references,
                    const RougeParams& params = {});

}  // namespace divref::metrics
