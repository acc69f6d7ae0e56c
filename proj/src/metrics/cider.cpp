#include "divref/metrics/cider.hpp"

#include <cmath>
#include <numeric>
#include <unordered_set>

#include "divref/error.hpp"
#include "divref/metrics/porter.hpp"
#include "divref/simd/kernels.hpp"
#include "divref/text/unicode.hpp"

namespace divref::metrics {
namespace {

bool punctuation_only(const std::string& token) {
  for (char32_t cp : text::decode_utf8(token)) {
    if (!text::is_punctuation(cp)) return false;
  }
  return true;
}

}  // namespace

CiderCounts cider_counts(std::string_view text, int max_order) {
  std::vector<std::string> stems;
  for (auto& tok : tokenize(text)) {
    if (punctuation_only(tok)) continue;
    stems.push_back(porter_stem(tok));
  }
  CiderCounts counts;
  counts.length = stems.size();
  counts.by_order.resize(static_cast<std::size_t>(max_order));
  for (int k = 1; k <= max_order; ++k) {
    if (stems.size() < static_cast<std::size_t>(k)) break;
    auto& table = counts.by_order[static_cast<std::size_t>(k - 1)];
    for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= stems.size(); ++i) {
      std::string key = stems[i];
      for (std::size_t t = 1; t < static_cast<std::size_t>(k); ++t) {
        key.push_back(' ');
        key += stems[i + t];
      }
      table[key] += 1.0;
    }
  }
  return counts;
}

struct CiderIdf::Vectors {
  std::vector<std::unordered_map<std::string, double>> weights;
  std::vector<double> norms;
};

CiderIdf::CiderIdf(std::span<const std::vector<std::string>> documents, const CiderParams& params)
    : params_(params), documents_(documents.size()) {
  if (documents_ < 2) throw UsageError("CIDEr requires an idf corpus of at least 2 instances");
  log_documents_ = std::log(static_cast<double>(documents_));
  for (const auto& doc : documents) {
    std::unordered_set<std::string> seen;
    for (const auto& ref : doc) {
      const auto counts = cider_counts(ref, params_.max_order);
      for (const auto& table : counts.by_order) {
        for (const auto& [ngram, tf] : table) seen.insert(ngram);
      }
    }
    for (const auto& g : seen) df_[g] += 1.0;
  }
}

double CiderIdf::document_frequency(const std::string& ngram) const {
  auto it = df_.find(ngram);
  return it == df_.end() ? 0.0 : it->second;
}

CiderIdf::Vectors CiderIdf::vectorize(const CiderCounts& counts) const {
  Vectors v;
  v.weights.resize(counts.by_order.size());
  v.norms.assign(counts.by_order.size(), 0.0);
  for (std::size_t k = 0; k < counts.by_order.size(); ++k) {
    for (const auto& [ngram, tf] : counts.by_order[k]) {
      const double idf = log_documents_ - std::log(std::max(1.0, document_frequency(ngram)));
      const double w = tf * idf;
      v.weights[k].emplace(ngram, w);
      v.norms[k] += w * w;
    }
    v.norms[k] = std::sqrt(v.norms[k]);
  }
  return v;
}

double CiderIdf::similarity(const CiderCounts& hyp, const CiderCounts& ref) const {
  const auto vh = vectorize(hyp);
  const auto vr = vectorize(ref);
  const double delta = static_cast<double>(hyp.length) - static_cast<double>(ref.length);
  const double penalty = std::exp(-(delta * delta) / (2.0 * params_.sigma * params_.sigma));
  double total = 0.0;
  std::vector<double> a;
  std::vector<double> b;
  for (std::size_t k = 0; k < vh.weights.size(); ++k) {
    // Align the two sparse vectors on the hypothesis n-grams; n-grams only in
    // the reference contribute min(0, w) * w = 0.
    a.clear();
    b.clear();
    for (const auto& [ngram, w] : vh.weights[k]) {
      auto it = vr.weights[k].find(ngram);
      if (it == vr.weights[k].end()) continue;
      a.push_back(w);
      b.push_back(it->second);
    }
    double val = simd::clipped_dot(a, b);
    if (vh.norms[k] != 0.0 && vr.norms[k] != 0.0) val /= vh.norms[k] * vr.norms[k];
    total += val * penalty;
  }
  return 10.0 * total / static_cast<double>(params_.max_order);
}

double CiderIdf::score(std::string_view hypothesis, std::string_view reference) const {
  return similarity(cider_counts(hypothesis, params_.max_order), cider_counts(reference, params_.max_order));
}

std::vector<double> CiderIdf::per_reference(std::string_view hypothesis, std::span<const std::string> references) const {
  if (references.empty()) throw UsageError("CIDEr requires at least one reference");
  const auto hyp = cider_counts(hypothesis, params_.max_order);
  std::vector<double> out;
  out.reserve(references.size());
  for (const auto& r : references) out.push_back(similarity(hyp, cider_counts(r, params_.max_order)));
  return out;
}

std::vector<MetricScore> cider(std::span<const CiderInstance> corpus, const CiderParams& params) {
  if (corpus.size() < 2) throw UsageError("CIDEr requires a corpus of at least 2 instances");
  std::vector<std::vector<std::string>> docs;
  docs.reserve(corpus.size());
  for (const auto& inst : corpus) docs.push_back(inst.references);
  const CiderIdf idf(docs, params);
  std::vector<MetricScore> out;
  out.reserve(corpus.size());
  for (const auto& inst : corpus) {
    MetricScore s;
    s.metric_id = MetricId::cider;
    s.per_reference = idf.per_reference(inst.hypothesis, inst.references);
    s.value = std::accumulate(s.per_reference.begin(), s.per_reference.end(), 0.0) /
              static_cast<double>(s.per_reference.size());
    s.aggregation_used = s.per_reference.size() == 1 ? Aggregation::single : Aggregation::mean;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace divref::metrics
