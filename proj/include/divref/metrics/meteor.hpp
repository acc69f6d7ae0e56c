#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divref/metrics/metric.hpp"

namespace divref::metrics {

struct MeteorAlignment {
  std::size_t matches = 0;
  std::size_t exact_matches = 0;
  std::size_t chunks = 0;
  // Whether the alignment search finished within its budget.
  bool exhaustive = true;
};

// One-to-one alignment of hypothesis and reference words where a pair may
// match exactly (equal surface form) or by Porter stem. Chosen to maximize
// exact matches, then total matches, then minimize the number of chunks
// (maximal runs adjacent and in order on both sides).
MeteorAlignment meteor_align(std::span<const std::string> hyp, std::span<const std::string> ref,
                             std::size_t search_budget = std::size_t{1} << 20);

// F_mean * (1 - gamma * (chunks / matches)^beta); 0 when nothing matches.
double meteor_from_alignment(const MeteorAlignment& a, std::size_t hyp_len, std::size_t ref_len,
                             const MeteorParams& params = {});

// Multi-reference METEOR is the best single-reference score.
MetricScore meteor(std::string_view hypothesis, std::span<const std::string> references,
                   const MeteorParams& params = {});

}  // namespace divref::metrics
