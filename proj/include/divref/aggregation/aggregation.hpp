#pragma once

#include <span>
#include <string_view>

#include "divref/corpus/types.hpp"
#include "divref/metrics/metric.hpp"
#include "divref/metrics/scorer.hpp"

namespace divref::aggregation {

using metrics::Aggregation;

// Combines per-reference scores: max or arithmetic mean. A single score is
// returned unchanged for any strategy. Throws std::invalid_argument on an
// empty list and UsageError for single/builtin with more than one score.
double aggregate(std::span<const double> per_reference, Aggregation strategy);

// UsageError when `strategy` is builtin and the metric has no native
// multi-reference algorithm.
void check_strategy(metrics::MetricId metric, Aggregation strategy);

// Scores `hypothesis` against {y*, y~1..y~n}. max/mean score each reference
// separately and keep the breakdown; builtin hands all references to the
// metric; single uses the ground truth only. Filtered entries are skipped
// unless `include_filtered`.
metrics::MetricScore score_with_refset(const metrics::Scorer& scorer, std::string_view hypothesis,
                                       const corpus::ReferenceSet& reference_set, Aggregation strategy,
                                       bool include_filtered = false);

// Same, over an explicit reference list whose first entry is the ground truth.
metrics::MetricScore score_with_references(const metrics::Scorer& scorer, std::string_view hypothesis,
                                           std::span<const std::string> references, Aggregation strategy);

}  // namespace divref::aggregation
