#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace divref {

// Exit codes used by the command line tool.
enum class ExitCode : int { ok = 0, usage = 1, data = 2, provider = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A provider (LLM / embedding backend) failed after retries, or the run is
// offline and the cache does not cover the request. `missing_keys` lists the
// cache keys that could not be produced.
class ProviderError : public std::runtime_error {
 public:
  explicit ProviderError(const std::string& what,
                         std::vector<std::string> missing_keys = {})
      : std::runtime_error(what), missing_keys_(std::move(missing_keys)) {}

  const std::vector<std::string>& missing_keys() const noexcept { return missing_keys_; }

 private:
  std::vector<std::string> missing_keys_;
};

}  // namespace divref
