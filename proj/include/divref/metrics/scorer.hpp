#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divref/metrics/cider.hpp"
#include "divref/metrics/metric.hpp"

namespace divref::metrics {

// Uniform entry point over the metric kernels, with the configured scale
// applied. Implementations are immutable and safe for concurrent use.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual MetricId id() const noexcept = 0;
  // One single-reference score per reference, reference order preserved.
  virtual std::vector<double> per_reference(std::string_view hypothesis,
                                            std::span<const std::string> references) const = 0;
  bool supports_builtin() const noexcept { return metrics::supports_builtin(id()); }
  // The metric's native multi-reference score. UsageError if unsupported.
  virtual double builtin(std::string_view hypothesis, std::span<const std::string> references) const;
};

// CIDEr needs a frozen idf table; other metrics ignore `idf`.
std::unique_ptr<Scorer> make_scorer(const MetricConfig& config, std::shared_ptr<const CiderIdf> idf = nullptr);

}  // namespace divref::metrics
