#include "divref/diversity/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "divref/error.hpp"
#include "divref/simd/kernels.hpp"
#include "divref/util/digest.hpp"
#include "divref/util/jsonl.hpp"

namespace divref::diversity {

double cosine_distance(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.values.size() != b.values.size()) {
    throw DataError("embedding dimension mismatch (" + std::to_string(a.values.size()) + " vs " +
                    std::to_string(b.values.size()) + ")");
  }
  if (a.model_id != b.model_id) throw DataError("embeddings from different models cannot be compared");
  const double aa = simd::dot(a.values, a.values);
  const double bb = simd::dot(b.values, b.values);
  if (!(aa > 0.0) || !(bb > 0.0)) throw DataError("zero-norm embedding");
  const double cos = simd::dot(a.values, b.values) / (std::sqrt(aa) * std::sqrt(bb));
  return 1.0 - std::clamp(cos, -1.0, 1.0);
}

double instance_diversity(std::span<const EmbeddingVector> v) {
  if (v.size() < 2) throw DataError("instance diversity needs at least 2 rephrasings");
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      sum += cosine_distance(v[i], v[j]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

double corpus_diversity(std::span<const std::vector<EmbeddingVector>> instances) {
  if (instances.empty()) throw DataError("corpus diversity needs at least one instance");
  double sum = 0.0;
  for (const auto& inst : instances) sum += instance_diversity(inst);
  return sum / static_cast<double>(instances.size());
}

EmbeddingCache::EmbeddingCache(std::filesystem::path path, bool writable) : path_(std::move(path)) {
  if (path_.empty()) return;
  if (std::filesystem::exists(path_)) {
    util::read_jsonl(path_, [&](std::size_t, const util::Json& obj) {
      EmbeddingVector v;
      v.model_id = util::require_string(obj, "model_id");
      const auto& values = util::require(obj, "values");
      if (!values.is_array()) throw DataError("field 'values' must be an array");
      for (const auto& x : values) {
        if (!x.is_number()) throw DataError("embedding values must be numbers");
        v.values.push_back(x.get<double>());
      }
      vectors_.emplace(key(util::require_string(obj, "text_digest"), v.model_id), std::move(v));
    });
  }
  if (writable) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    out_.open(path_, std::ios::binary | std::ios::app);
    if (!out_) throw DataError("cannot open embedding cache " + path_.string());
  }
}

std::string EmbeddingCache::key(const std::string& digest, const std::string& model_id) {
  return digest + "\t" + model_id;
}

std::optional<EmbeddingVector> EmbeddingCache::find(const std::string& text, const std::string& model_id) const {
  std::lock_guard lock(mutex_);
  auto it = vectors_.find(key(util::sha256_hex(text), model_id));
  if (it == vectors_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingCache::insert(const std::string& text, const EmbeddingVector& v) {
  const auto digest = util::sha256_hex(text);
  std::lock_guard lock(mutex_);
  if (!vectors_.emplace(key(digest, v.model_id), v).second || !out_.is_open()) return;
  nlohmann::ordered_json rec;
  rec["text_digest"] = digest;
  rec["model_id"] = v.model_id;
  rec["values"] = v.values;
  util::write_jsonl_line(out_, rec);
  out_.flush();
}

std::size_t EmbeddingCache::size() const {
  std::lock_guard lock(mutex_);
  return vectors_.size();
}

std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts, const std::string& model_id,
                                         diversifier::EmbeddingProvider& provider, EmbeddingCache& cache,
                                         const diversifier::RetryPolicy& retry, std::size_t batch_size) {
  std::vector<EmbeddingVector> out(texts.size());
  // Distinct uncached texts, each requested once.
  std::vector<std::string> missing;
  std::unordered_map<std::string, std::vector<std::size_t>> positions;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (auto hit = cache.find(texts[i], model_id)) {
      out[i] = std::move(*hit);
      continue;
    }
    auto& pos = positions[texts[i]];
    if (pos.empty()) missing.push_back(texts[i]);
    pos.push_back(i);
  }
  batch_size = std::max<std::size_t>(1, batch_size);
  for (std::size_t start = 0; start < missing.size(); start += batch_size) {
    const std::size_t end = std::min(missing.size(), start + batch_size);
    const std::vector<std::string> batch(missing.begin() + static_cast<std::ptrdiff_t>(start),
                                         missing.begin() + static_cast<std::ptrdiff_t>(end));
    const auto vectors = diversifier::with_retries<std::vector<std::vector<double>>>(
        retry, [&] { return provider.embed(batch, model_id); });
    if (vectors.size() != batch.size()) throw ProviderError("embedding provider returned the wrong number of vectors");
    for (std::size_t k = 0; k < batch.size(); ++k) {
      EmbeddingVector v{vectors[k], model_id};
      cache.insert(batch[k], v);
      for (std::size_t i : positions.at(batch[k])) out[i] = v;
    }
  }
  return out;
}

DiversityReport diversity_report(const std::vector<corpus::DiversifiedRecord>& records,
                                 const std::unordered_map<std::string, std::string>& ground_truths,
                                 const std::string& model_id, diversifier::EmbeddingProvider& provider,
                                 EmbeddingCache& cache, const DiversityOptions& options,
                                 const diversifier::RetryPolicy& retry) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::string>> texts;
  for (const auto& r : records) {
    if (r.filtered.value_or(false) && !options.include_filtered) continue;
    auto [it, inserted] = texts.try_emplace(r.segment_id);
    if (inserted) {
      order.push_back(r.segment_id);
      if (options.include_ground_truth) {
        auto gt = ground_truths.find(r.segment_id);
        if (gt == ground_truths.end()) throw DataError("no ground truth for segment '" + r.segment_id + "'");
        it->second.push_back(gt->second);
      }
    }
    it->second.push_back(r.text);
  }

  std::vector<std::string> all;
  for (const auto& id : order) {
    for (const auto& t : texts[id]) all.push_back(t);
  }
  const auto vectors = embed_texts(all, model_id, provider, cache, retry);

  DiversityReport report;
  std::vector<std::vector<EmbeddingVector>> instances;
  std::size_t offset = 0;
  for (const auto& id : order) {
    const std::size_t n = texts[id].size();
    std::vector<EmbeddingVector> inst(vectors.begin() + static_cast<std::ptrdiff_t>(offset),
                                      vectors.begin() + static_cast<std::ptrdiff_t>(offset + n));
    offset += n;
    if (n < 2) {
      report.skipped.push_back(id);
      continue;
    }
    report.instances.push_back({id, n, instance_diversity(inst)});
    instances.push_back(std::move(inst));
  }
  if (!instances.empty()) report.corpus_value = corpus_diversity(instances);
  return report;
}

}  // namespace divref::diversity
