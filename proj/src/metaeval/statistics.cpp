#include "divref/metaeval/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "divref/error.hpp"

namespace divref::metaeval {

namespace {

void check_inputs(std::span<const double> x, std::span<const double> y, const char* what) {
  if (x.size() != y.size()) {
    throw DataError(std::string(what) + ": length mismatch (" + std::to_string(x.size()) + " vs " +
                    std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) throw DataError(std::string(what) + ": needs at least 2 items");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw DataError(std::string(what) + ": non-finite value");
  }
}

// Number of tied pairs among runs of equal values in an already sorted range.
template <typename It, typename Eq>
std::uint64_t tied_pairs(It begin, It end, Eq eq) {
  std::uint64_t total = 0;
  std::uint64_t run = 1;
  for (It it = begin; it != end; ++it) {
    if (it + 1 != end && eq(*it, *(it + 1))) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

// Sorts `v` in place and returns the number of inversions.
std::uint64_t merge_sort_swaps(std::vector<double>& v, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = merge_sort_swaps(v, buf, lo, mid) + merge_sort_swaps(v, buf, mid, hi);
  std::size_t i = lo;
  std::size_t j = mid;
  std::size_t k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y, "kendall_tau_b");
  const std::size_t n = x.size();
  std::vector<std::pair<double, double>> pairs(n);
  for (std::size_t i = 0; i < n; ++i) pairs[i] = {x[i], y[i]};
  std::sort(pairs.begin(), pairs.end());

  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::uint64_t tx = tied_pairs(pairs.begin(), pairs.end(), [](auto& a, auto& b) { return a.first == b.first; });
  const std::uint64_t txy = tied_pairs(pairs.begin(), pairs.end(), [](auto& a, auto& b) { return a == b; });

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = pairs[i].second;
  std::vector<double> buf(n);
  const std::uint64_t swaps = merge_sort_swaps(ys, buf, 0, n);
  const std::uint64_t ty = tied_pairs(ys.begin(), ys.end(), [](double a, double b) { return a == b; });

  if (tx == total || ty == total) throw DataError("kendall_tau_b: degenerate all-tie input");
  // concordant - discordant = total - tx - ty + txy - 2 * swaps
  const double numer = static_cast<double>(total) - static_cast<double>(tx) - static_cast<double>(ty) +
                       static_cast<double>(txy) - 2.0 * static_cast<double>(swaps);
  const double denom = std::sqrt(static_cast<double>(total - tx)) * std::sqrt(static_cast<double>(total - ty));
  return std::clamp(numer / denom, -1.0, 1.0);
}

std::vector<double> mid_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y, "spearman");
  const auto rx = mid_ranks(x);
  const auto ry = mid_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("spearman: degenerate all-tie input");
  return std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
}

PairCounts pairwise_counts(const std::map<std::string, double>& metric, const std::map<std::string, double>& human) {
  if (metric.size() != human.size() ||
      !std::equal(metric.begin(), metric.end(), human.begin(), [](auto& a, auto& b) { return a.first == b.first; })) {
    throw DataError("pairwise_system_accuracy: metric and human scores cover different systems");
  }
  if (metric.size() < 2) throw DataError("pairwise_system_accuracy: needs at least 2 systems");
  std::vector<std::pair<double, double>> s;
  for (auto m = metric.begin(), h = human.begin(); m != metric.end(); ++m, ++h) s.emplace_back(m->second, h->second);
  PairCounts c;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double dh = s[i].second - s[j].second;
      if (dh == 0.0) {
        ++c.excluded;
        continue;
      }
      const double dm = s[i].first - s[j].first;
      ++c.evaluated;
      if ((dm > 0.0 && dh > 0.0) || (dm < 0.0 && dh < 0.0)) ++c.correct;
    }
  }
  return c;
}

AccuracyResult pairwise_system_accuracy(const std::map<std::string, double>& metric,
                                        const std::map<std::string, double>& human) {
  const auto c = pairwise_counts(metric, human);
  if (c.evaluated == 0) throw DataError("pairwise_system_accuracy: zero evaluable pairs");
  return {static_cast<double>(c.correct) / static_cast<double>(c.evaluated), c.evaluated, c.excluded};
}

AccuracyResult preference_accuracy(std::span<const PreferenceInstance> instances) {
  if (instances.empty()) throw DataError("preference_accuracy: no instances for this setting");
  std::size_t correct = 0;
  for (const auto& p : instances) {
    const double preferred = p.preferred_index == 0 ? p.score_a : p.score_b;
    const double other = p.preferred_index == 0 ? p.score_b : p.score_a;
    if (preferred > other) ++correct;
  }
  return {static_cast<double>(correct) / static_cast<double>(instances.size()), instances.size(), 0};
}

}  // namespace divref::metaeval
