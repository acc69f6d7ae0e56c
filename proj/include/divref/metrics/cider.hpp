#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "divref/metrics/metric.hpp"

namespace divref::metrics {

// Stemmed word n-grams of one text: per order, n-gram (space-joined stems)
// to term frequency. Punctuation-only tokens are dropped.
struct CiderCounts {
  std::vector<std::unordered_map<std::string, double>> by_order;
  std::size_t length = 0;
};

CiderCounts cider_counts(std::string_view text, int max_order = 4);

// Document frequencies frozen from an idf corpus. Each document is the set of
// references of one instance that may contribute to idf (never diversified
// ones). Read-only after construction and safe to share across threads.
class CiderIdf {
 public:
  CiderIdf(std::span<const std::vector<std::string>> documents, const CiderParams& params = {});

  std::size_t document_count() const noexcept { return documents_; }
  double document_frequency(const std::string& ngram) const;
  const CiderParams& params() const noexcept { return params_; }

  // CIDEr-D of `hypothesis` against one reference: per-order clipped tf-idf
  // cosine with a Gaussian length penalty, averaged over orders, times 10.
  double score(std::string_view hypothesis, std::string_view reference) const;
  std::vector<double> per_reference(std::string_view hypothesis, std::span<const std::string> references) const;

 private:
  struct Vectors;
  Vectors vectorize(const CiderCounts& counts) const;
  double similarity(const CiderCounts& hyp, const CiderCounts& ref) const;

  CiderParams params_;
  std::size_t documents_ = 0;
  double log_documents_ = 0.0;
  std::unordered_map<std::string, double> df_;
};

struct CiderInstance {
  std::string hypothesis;
  std::vector<std::string> references;
};

// Corpus CIDEr-D: idf from the instances' references, each score the mean
// over that instance's references. Requires >= 2 instances.
std::vector<MetricScore> cider(std::span<const CiderInstance> corpus, const CiderParams& params = {});

}  // namespace divref::metrics
