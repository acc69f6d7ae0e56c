#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "divref/corpus/types.hpp"

namespace divref::diversifier {

// Append-only store of generations keyed by DiversifiedRecord::cache_key().
// Existing entries are loaded on open; each append is written and flushed
// before returning, so a crash loses at most the record being written.
// Appends are serialized; lookups are safe concurrently with appends.
class GenerationCache {
 public:
  // An empty path gives an in-memory cache.
  explicit GenerationCache(std::filesystem::path path = {});

  std::optional<corpus::DiversifiedRecord> find(const std::string& key) const;
  // Records already present under the same key are left untouched.
  void append(const corpus::DiversifiedRecord& record);
  std::size_t size() const;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, corpus::DiversifiedRecord> records_;
  std::ofstream out_;
};

// Append-only text store keyed by an opaque string, used for judge answers:
// lines of {"key","answer"}.
class AnswerCache {
 public:
  explicit AnswerCache(std::filesystem::path path = {});

  std::optional<std::string> find(const std::string& key) const;
  void append(const std::string& key, const std::string& answer);

 private:
  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::string> answers_;
  std::ofstream out_;
};

}  // namespace divref::diversifier
