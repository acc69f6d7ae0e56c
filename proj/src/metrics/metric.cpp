#include "divref/metrics/metric.hpp"

#include "divref/error.hpp"

namespace divref::metrics {

void MetricConfig::validate() const {
  if (bleu.max_order < 1 || bleu.max_order > 8) throw UsageError("BLEU max_order must be in 1..8");
  if (chrf.char_order < 1 || chrf.char_order > 12) throw UsageError("ChrF char_order must be in 1..12");
  if (!(chrf.beta > 0.0)) throw UsageError("ChrF beta must be > 0");
  if (!(meteor.alpha > 0.0 && meteor.alpha < 1.0)) throw UsageError("METEOR alpha must be in (0,1)");
  if (!(meteor.beta > 0.0)) throw UsageError("METEOR beta must be > 0");
  if (!(meteor.gamma >= 0.0 && meteor.gamma <= 1.0)) throw UsageError("METEOR gamma must be in [0,1]");
  if (meteor.search_budget == 0) throw UsageError("METEOR search budget must be positive");
  if (cider.max_order < 1 || cider.max_order > 8) throw UsageError("CIDEr max_order must be in 1..8");
  if (!(cider.sigma > 0.0)) throw UsageError("CIDEr sigma must be > 0");
}

std::string_view to_string(MetricId id) noexcept {
  switch (id) {
    case MetricId::bleu: return "bleu";
    case MetricId::chrf: return "chrf";
    case MetricId::rouge1: return "rouge1";
    case MetricId::rouge2: return "rouge2";
    case MetricId::rougeL: return "rougeL";
    case MetricId::meteor: return "meteor";
    case MetricId::cider: return "cider";
  }
  return "bleu";
}

std::string_view to_string(Aggregation a) noexcept {
  switch (a) {
    case Aggregation::single: return "single";
    case Aggregation::max: return "max";
    case Aggregation::mean: return "mean";
    case Aggregation::builtin: return "builtin";
  }
  return "single";
}

MetricId parse_metric_id(std::string_view s) {
  for (auto id : all_metrics()) {
    if (to_string(id) == s) return id;
  }
  throw UsageError("unknown metric '" + std::string(s) + "'");
}

Aggregation parse_aggregation(std::string_view s) {
  for (auto a : {Aggregation::single, Aggregation::max, Aggregation::mean, Aggregation::builtin}) {
    if (to_string(a) == s) return a;
  }
  throw UsageError("unknown aggregation '" + std::string(s) + "'");
}

std::vector<MetricId> all_metrics() {
  return {MetricId::bleu,   MetricId::chrf,   MetricId::rouge1, MetricId::rouge2,
          MetricId::rougeL, MetricId::meteor, MetricId::cider};
}

double upper_bound(MetricId id, Scale scale) noexcept {
  if (id == MetricId::cider) return 10.0;
  switch (scale) {
    case Scale::unit: return 1.0;
    case Scale::percent: return 100.0;
    case Scale::native: return id == MetricId::chrf ? 100.0 : 1.0;
  }
  return 1.0;
}

bool supports_builtin(MetricId id) noexcept { return id == MetricId::bleu || id == MetricId::chrf; }

}  // namespace divref::metrics
