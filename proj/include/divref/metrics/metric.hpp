#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divref/metrics/tokenizer.hpp"

namespace divref::metrics {

enum class MetricId { bleu, chrf, rouge1, rouge2, rougeL, meteor, cider };

// How per-reference scores were combined into MetricScore::value.
enum class Aggregation { single, max, mean, builtin };

// native: BLEU/ROUGE/METEOR in [0,1], ChrF in [0,100], CIDEr-D in [0,10].
enum class Scale { native, unit, percent };

struct BleuParams {
  int max_order = 4;
  TokenizerConfig tokenizer{};
};

struct ChrfParams {
  int char_order = 6;
  double beta = 2.0;
  bool lowercase = false;
};

struct RougeParams {
  TokenizerConfig tokenizer{};
};

struct MeteorParams {
  double alpha = 0.9;
  double beta = 3.0;
  double gamma = 0.5;
  TokenizerConfig tokenizer{};
  // Alignment search nodes per (hypothesis, reference); beyond it the best
  // alignment found so far is used.
  std::size_t search_budget = std::size_t{1} << 20;
};

struct CiderParams {
  int max_order = 4;
  double sigma = 6.0;
};

struct MetricConfig {
  MetricId metric_id = MetricId::bleu;
  Scale scale = Scale::native;
  BleuParams bleu{};
  ChrfParams chrf{};
  RougeParams rouge{};
  MeteorParams meteor{};
  CiderParams cider{};

  // Throws UsageError for out-of-range parameters.
  void validate() const;
};

struct MetricScore {
  double value = 0.0;
  MetricId metric_id = MetricId::bleu;
  std::vector<double> per_reference;
  Aggregation aggregation_used = Aggregation::single;
};

std::string_view to_string(MetricId id) noexcept;
std::string_view to_string(Aggregation a) noexcept;
MetricId parse_metric_id(std::string_view s);
Aggregation parse_aggregation(std::string_view s);
std::vector<MetricId> all_metrics();

// Inclusive upper bound of values produced under `scale` (lower bound is 0).
double upper_bound(MetricId id, Scale scale = Scale::native) noexcept;
// Metrics with a native multi-reference algorithm.
bool supports_builtin(MetricId id) noexcept;

}  // namespace divref::metrics
