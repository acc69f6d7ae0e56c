#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "divref/corpus/types.hpp"
#include "divref/diversifier/provider.hpp"

namespace divref::diversity {

struct EmbeddingVector {
  std::vector<double> values;
  std::string model_id;
};

// 1 - cos(a, b), in [0, 2]. DataError on dimension or model mismatch and on
// zero-norm input.
double cosine_distance(const EmbeddingVector& a, const EmbeddingVector& b);

// Mean cosine distance over all unordered pairs. Needs >= 2 vectors.
double instance_diversity(std::span<const EmbeddingVector> rephrasings);

// Mean of instance_diversity over instances. Every instance needs >= 2
// vectors and there must be at least one instance.
double corpus_diversity(std::span<const std::vector<EmbeddingVector>> instances);

// Line-delimited {"text_digest","model_id","values"} keyed by
// (sha256(text), model_id). Appends are serialized and flushed.
class EmbeddingCache {
 public:
  explicit EmbeddingCache(std::filesystem::path path = {}, bool writable = true);

  std::optional<EmbeddingVector> find(const std::string& text, const std::string& model_id) const;
  void insert(const std::string& text, const EmbeddingVector& v);
  std::size_t size() const;

 private:
  static std::string key(const std::string& digest, const std::string& model_id);

  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, EmbeddingVector> vectors_;
  std::ofstream out_;
};

// Embeds `texts`, taking cached vectors first and requesting the rest from
// `provider` in batches (with retries). Results follow input order.
std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts, const std::string& model_id,
                                         diversifier::EmbeddingProvider& provider, EmbeddingCache& cache,
                                         const diversifier::RetryPolicy& retry = {}, std::size_t batch_size = 64);

struct DiversityOptions {
  // Also count pairs involving the ground truth.
  bool include_ground_truth = false;
  bool include_filtered = false;
};

struct InstanceDiversity {
  std::string segment_id;
  std::size_t n_texts = 0;
  double value = 0.0;
};

struct DiversityReport {
  std::vector<InstanceDiversity> instances;
  double corpus_value = 0.0;
  // Segments with fewer than two texts after filtering.
  std::vector<std::string> skipped;
};

// Texts per segment: the LLM rephrasings (first-appearance order) and, when
// requested, the ground truth first.
DiversityReport diversity_report(const std::vector<corpus::DiversifiedRecord>& records,
                                 const std::unordered_map<std::string, std::string>& ground_truths,
                                 const std::string& model_id, diversifier::EmbeddingProvider& provider,
                                 EmbeddingCache& cache, const DiversityOptions& options = {},
                                 const diversifier::RetryPolicy& retry = {});

}  // namespace divref::diversity
