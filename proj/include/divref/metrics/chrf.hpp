#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divref/metrics/metric.hpp"

namespace divref::metrics {

// Character n-gram counts per order (index k-1 for order k).
struct ChrfStats {
  std::vector<std::uint64_t> hyp;
  std::vector<std::uint64_t> ref;
  std::vector<std::uint64_t> match;
};

// Code points of `text` after NFC, optional lowercasing and whitespace removal.
std::vector<std::uint32_t> chrf_symbols(std::string_view text, bool lowercase);

// F-beta of precision and recall averaged over the orders where both sides
// have n-grams, in [0,100]. 0 when no order is effective.
double chrf_from_statistics(const ChrfStats& stats, double beta);

// Multi-reference ChrF is the best single-reference score.
MetricScore chrf(std::string_view hypothesis, std::span<const std::string> references, const ChrfParams& params = {});
std::vector<double> chrf_per_reference(std::string_view hypothesis, std::span<const std::string> references,
                                       const ChrfParams& params = {});

}  // namespace divref::metrics
