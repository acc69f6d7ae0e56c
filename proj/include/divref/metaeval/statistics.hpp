#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace divref::metaeval {

// Kendall tau-b, O(n log n). DataError on length mismatch, n < 2, or a list
// made entirely of ties.
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

// Pearson correlation of mid-ranks. Same errors as kendall_tau_b.
double spearman(std::span<const double> x, std::span<const double> y);

// Average ranks (1-based) with ties sharing the mean of their positions.
std::vector<double> mid_ranks(std::span<const double> v);

struct AccuracyResult {
  double value = 0.0;
  std::size_t n_items = 0;
  std::size_t n_excluded = 0;
};

// Agreement counts for pairwise system ranking; `correct / evaluated`.
struct PairCounts {
  std::size_t correct = 0;
  std::size_t evaluated = 0;
  std::size_t excluded = 0;
};

// Unordered system pairs with a non-zero human delta; a pair is correct when
// the metric delta has the same sign (metric ties are incorrect). Pairs tied
// for humans are excluded. DataError if the system sets differ or there are
// fewer than two systems.
PairCounts pairwise_counts(const std::map<std::string, double>& metric, const std::map<std::string, double>& human);
// Same, as an accuracy. DataError "zero evaluable pairs" when every pair is
// tied for humans.
AccuracyResult pairwise_system_accuracy(const std::map<std::string, double>& metric,
                                        const std::map<std::string, double>& human);

struct PreferenceInstance {
  double score_a = 0.0;
  double score_b = 0.0;
  int preferred_index = 0;
};

// Fraction where the preferred candidate scores strictly higher.
// DataError on an empty list.
AccuracyResult preference_accuracy(std::span<const PreferenceInstance> instances);

}  // namespace divref::metaeval
