#include "divref/diversifier/cache.hpp"

#include "divref/corpus/io.hpp"
#include "divref/error.hpp"
#include "divref/util/jsonl.hpp"

namespace divref::diversifier {

GenerationCache::GenerationCache(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.empty()) return;
  if (std::filesystem::exists(path_)) {
    for (auto& r : corpus::load_records(path_)) {
      auto key = r.cache_key();
      records_.emplace(std::move(key), std::move(r));
    }
  } else if (path_.has_parent_path()) {
    std::filesystem::create_directories(path_.parent_path());
  }
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw DataError("cannot open cache file " + path_.string());
}

std::optional<corpus::DiversifiedRecord> GenerationCache::find(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = records_.find(key);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void GenerationCache::append(const corpus::DiversifiedRecord& record) {
  std::lock_guard lock(mutex_);
  auto [it, inserted] = records_.emplace(record.cache_key(), record);
  if (!inserted || path_.empty()) return;
  util::write_jsonl_line(out_, corpus::record_to_json(record));
  out_.flush();
  if (!out_) throw DataError("failed writing cache file " + path_.string());
}

std::size_t GenerationCache::size() const {
  std::lock_guard lock(mutex_);
  return records_.size();
}

AnswerCache::AnswerCache(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.empty()) return;
  if (std::filesystem::exists(path_)) {
    util::read_jsonl(path_, [&](std::size_t, const util::Json& obj) {
      answers_.emplace(util::require_string(obj, "key"), util::require_string(obj, "answer"));
    });
  } else if (path_.has_parent_path()) {
    std::filesystem::create_directories(path_.parent_path());
  }
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw DataError("cannot open cache file " + path_.string());
}

std::optional<std::string> AnswerCache::find(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = answers_.find(key);
  if (it == answers_.end()) return std::nullopt;
  return it->second;
}

void AnswerCache::append(const std::string& key, const std::string& answer) {
  std::lock_guard lock(mutex_);
  if (!answers_.emplace(key, answer).second || path_.empty()) return;
  nlohmann::ordered_json rec;
  rec["key"] = key;
  rec["answer"] = answer;
  util::write_jsonl_line(out_, rec);
  out_.flush();
  if (!out_) throw DataError("failed writing cache file " + path_.string());
}

}  // namespace divref::diversifier
