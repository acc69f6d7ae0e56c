#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "divref/error.hpp"

namespace divref::diversifier {

struct GenerationParams {
  double temperature = 1.0;
  double top_p = 0.9;
  std::string model_id = "gpt-3.5-turbo";
  int max_attempts = 5;

  void validate() const;
};

// A provider failure worth retrying (timeouts, 429, 5xx, empty output).
class TransientProviderError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

// Text completion backend. Implementations must be safe to call from several
// threads at once.
class CompletionProvider {
 public:
  virtual ~CompletionProvider() = default;
  virtual std::string complete(const std::string& prompt, const GenerationParams& params) = 0;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  // One vector per input text, in input order.
  virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts,
                                                 const std::string& model_id) = 0;
};

// Provider config file (key=value, '#' comments):
//   base_url, model_id, temperature, top_p, max_concurrency,
//   api (chat | completions), embedding_model, timeout_seconds,
//   judge_model, max_attempts
struct ProviderConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string api = "chat";
  std::string model_id = "gpt-3.5-turbo";
  std::string judge_model;
  std::string embedding_model = "text-embedding-ada-002";
  double temperature = 1.0;
  double top_p = 0.9;
  int max_attempts = 5;
  std::size_t max_concurrency = 4;
  double timeout_seconds = 60.0;

  GenerationParams generation_params() const;
  // Judge calls default to temperature 0 with the judge model (or model_id).
  GenerationParams judge_params() const;
};

ProviderConfig parse_provider_config(const std::string& text, const std::string& origin);
ProviderConfig load_provider_config(const std::filesystem::path& path);

// Name of the environment variable holding the API key.
inline constexpr const char* kApiKeyVariable = "DIVREF_API_KEY";

// OpenAI-compatible HTTP backend (chat/completions, completions, embeddings).
// The API key is read from DIVREF_API_KEY at construction.
std::shared_ptr<CompletionProvider> make_http_completion_provider(const ProviderConfig& config);
std::shared_ptr<EmbeddingProvider> make_http_embedding_provider(const ProviderConfig& config);

// Providers that refuse every call; used when the network is forbidden.
std::shared_ptr<CompletionProvider> make_offline_completion_provider();
std::shared_ptr<EmbeddingProvider> make_offline_embedding_provider();

using Sleeper = std::function<void(std::chrono::milliseconds)>;

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_delay{500};
  std::chrono::milliseconds max_delay{30000};
  Sleeper sleep;  // defaults to std::this_thread::sleep_for
};

// Calls `attempt` until it returns without throwing a TransientProviderError,
// sleeping initial_delay * 2^k between attempts. The last transient error is
// rethrown once attempts run out; other exceptions propagate immediately.
template <typename T>
T with_retries(const RetryPolicy& policy, const std::function<T()>& attempt);

void backoff_sleep(const RetryPolicy& policy, int attempt_index);

template <typename T>
T with_retries(const RetryPolicy& policy, const std::function<T()>& attempt) {
  const int attempts = policy.max_attempts < 1 ? 1 : policy.max_attempts;
  for (int i = 0;; ++i) {
    try {
      return attempt();
    } catch (const TransientProviderError&) {
      if (i + 1 >= attempts) throw;
      backoff_sleep(policy, i);
    }
  }
}

}  // namespace divref::diversifier
