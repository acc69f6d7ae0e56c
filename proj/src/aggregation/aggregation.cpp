#include "divref/aggregation/aggregation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "divref/error.hpp"

namespace divref::aggregation {

double aggregate(std::span<const double> per_reference, Aggregation strategy) {
  if (per_reference.empty()) throw std::invalid_argument("aggregate: empty score list");
  if (per_reference.size() == 1) return per_reference.front();
  switch (strategy) {
    case Aggregation::max: return *std::max_element(per_reference.begin(), per_reference.end());
    case Aggregation::mean: {
      const double mean = std::accumulate(per_reference.begin(), per_reference.end(), 0.0) /
                          static_cast<double>(per_reference.size());
      // Keep the result inside [min, max] despite rounding.
      const auto [lo, hi] = std::minmax_element(per_reference.begin(), per_reference.end());
      return std::clamp(mean, *lo, *hi);
    }
    case Aggregation::single:
    case Aggregation::builtin: break;
  }
  throw UsageError("aggregate: strategy '" + std::string(metrics::to_string(strategy)) + "' combines no scores");
}

void check_strategy(metrics::MetricId metric, Aggregation strategy) {
  if (strategy == Aggregation::builtin && !metrics::supports_builtin(metric)) {
    throw UsageError("configuration error: metric '" + std::string(metrics::to_string(metric)) +
                     "' has no built-in multi-reference mode");
  }
}

metrics::MetricScore score_with_references(const metrics::Scorer& scorer, std::string_view hypothesis,
                                           std::span<const std::string> references, Aggregation strategy) {
  check_strategy(scorer.id(), strategy);
  if (references.empty()) throw UsageError("no references to score against");
  metrics::MetricScore score;
  score.metric_id = scorer.id();
  score.aggregation_used = strategy;
  switch (strategy) {
    case Aggregation::single:
      score.per_reference = scorer.per_reference(hypothesis, references.first(1));
      score.value = score.per_reference.front();
      break;
    case Aggregation::builtin:
      score.value = scorer.builtin(hypothesis, references);
      break;
    case Aggregation::max:
    case Aggregation::mean:
      score.per_reference = scorer.per_reference(hypothesis, references);
      score.value = aggregate(score.per_reference, strategy);
      break;
  }
  return score;
}

metrics::MetricScore score_with_refset(const metrics::Scorer& scorer, std::string_view hypothesis,
                                       const corpus::ReferenceSet& reference_set, Aggregation strategy,
                                       bool include_filtered) {
  const auto refs = reference_set.references(include_filtered);
  return score_with_references(scorer, hypothesis, refs, strategy);
}

}  // namespace divref::aggregation
