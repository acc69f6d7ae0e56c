#include "divref/metrics/scorer.hpp"

#include <algorithm>

#include "divref/error.hpp"
#include "divref/metrics/bleu.hpp"
#include "divref/metrics/chrf.hpp"
#include "divref/metrics/meteor.hpp"
#include "divref/metrics/rouge.hpp"

namespace divref::metrics {

double Scorer::builtin(std::string_view, std::span<const std::string>) const {
  throw UsageError("metric '" + std::string(to_string(id())) + "' has no built-in multi-reference mode");
}

namespace {

double scale_factor(MetricId id, Scale scale) {
  if (id == MetricId::cider || scale == Scale::native) return 1.0;
  const bool native_percent = id == MetricId::chrf;
  if (scale == Scale::percent) return native_percent ? 1.0 : 100.0;
  return native_percent ? 0.01 : 1.0;
}

class ScaledScorer : public Scorer {
 public:
  explicit ScaledScorer(const MetricConfig& config) : config_(config), factor_(scale_factor(config.metric_id, config.scale)) {}

  MetricId id() const noexcept override { return config_.metric_id; }

  std::vector<double> per_reference(std::string_view hyp, std::span<const std::string> refs) const override {
    auto out = raw_per_reference(hyp, refs);
    if (factor_ != 1.0) {
      for (auto& v : out) v *= factor_;
    }
    return out;
  }

  double builtin(std::string_view hyp, std::span<const std::string> refs) const override {
    switch (config_.metric_id) {
      case MetricId::bleu: return factor_ * sentence_bleu(hyp, refs, config_.bleu).value;
      case MetricId::chrf: return factor_ * chrf(hyp, refs, config_.chrf).value;
      default: return Scorer::builtin(hyp, refs);
    }
  }

 protected:
  virtual std::vector<double> raw_per_reference(std::string_view hyp, std::span<const std::string> refs) const {
    switch (config_.metric_id) {
      case MetricId::bleu: return sentence_bleu_per_reference(hyp, refs, config_.bleu);
      case MetricId::chrf: return chrf_per_reference(hyp, refs, config_.chrf);
      case MetricId::rouge1: return rouge_n(hyp, refs, 1, config_.rouge).per_reference;
      case MetricId::rouge2: return rouge_n(hyp, refs, 2, config_.rouge).per_reference;
      case MetricId::rougeL: return rouge_l(hyp, refs, config_.rouge).per_reference;
      case MetricId::meteor: return meteor(hyp, refs, config_.meteor).per_reference;
      case MetricId::cider: break;
    }
    throw UsageError("CIDEr scorer requires an idf table");
  }

  MetricConfig config_;
  double factor_;
};

class CiderScorer : public ScaledScorer {
 public:
  CiderScorer(const MetricConfig& config, std::shared_ptr<const CiderIdf> idf) : ScaledScorer(config), idf_(std::move(idf)) {}

 protected:
  std::vector<double> raw_per_reference(std::string_view hyp, std::span<const std::string> refs) const override {
    return idf_->per_reference(hyp, refs);
  }

 private:
  std::shared_ptr<const CiderIdf> idf_;
};

}  // namespace

std::unique_ptr<Scorer> make_scorer(const MetricConfig& config, std::shared_ptr<const CiderIdf> idf) {
  config.validate();
  if (config.metric_id == MetricId::cider) {
    if (!idf) throw UsageError("CIDEr scorer requires an idf table");
    return std::make_unique<CiderScorer>(config, std::move(idf));
  }
  return std::make_unique<ScaledScorer>(config);
}

}  // namespace divref::metrics
