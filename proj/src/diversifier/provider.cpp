#include "divref/diversifier/provider.hpp"

#include <httplib.h>

#include <cstdlib>
#include <sstream>
#include <thread>

#include "divref/text/unicode.hpp"
#include "divref/util/jsonl.hpp"

namespace divref::diversifier {

using util::Json;

void GenerationParams::validate() const {
  if (!(temperature >= 0.0 && temperature <= 2.0)) throw UsageError("temperature must be in [0,2]");
  if (!(top_p > 0.0 && top_p <= 1.0)) throw UsageError("top_p must be in (0,1]");
  if (max_attempts < 1) throw UsageError("max_attempts must be >= 1");
  if (model_id.empty()) throw UsageError("model_id must not be empty");
}

GenerationParams ProviderConfig::generation_params() const {
  GenerationParams p;
  p.temperature = temperature;
  p.top_p = top_p;
  p.model_id = model_id;
  p.max_attempts = max_attempts;
  return p;
}

GenerationParams ProviderConfig::judge_params() const {
  GenerationParams p = generation_params();
  p.temperature = 0.0;
  p.top_p = 1.0;
  if (!judge_model.empty()) p.model_id = judge_model;
  return p;
}

namespace {

double to_double(const std::string& key, const std::string& value, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(where + ": '" + key + "' expects a number, got '" + value + "'");
}

}  // namespace

ProviderConfig parse_provider_config(const std::string& text, const std::string& origin) {
  ProviderConfig c;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = std::string(text::trim(line.substr(0, line.find('#'))));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = origin + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw UsageError(where + ": expected key=value");
    const std::string key(text::trim(body.substr(0, eq)));
    const std::string value(text::trim(body.substr(eq + 1)));
    if (key == "base_url") c.base_url = value;
    else if (key == "api") c.api = value;
    else if (key == "model_id") c.model_id = value;
    else if (key == "judge_model") c.judge_model = value;
    else if (key == "embedding_model") c.embedding_model = value;
    else if (key == "temperature") c.temperature = to_double(key, value, where);
    else if (key == "top_p") c.top_p = to_double(key, value, where);
    else if (key == "timeout_seconds") c.timeout_seconds = to_double(key, value, where);
    else if (key == "max_attempts") c.max_attempts = static_cast<int>(to_double(key, value, where));
    else if (key == "max_concurrency") c.max_concurrency = static_cast<std::size_t>(to_double(key, value, where));
    else throw UsageError(where + ": unknown key '" + key + "'");
  }
  if (c.api != "chat" && c.api != "completions") throw UsageError(origin + ": api must be 'chat' or 'completions'");
  if (c.max_concurrency < 1) throw UsageError(origin + ": max_concurrency must be >= 1");
  c.generation_params().validate();
  return c;
}

ProviderConfig load_provider_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = util::read_file(path);
  } catch (const DataError&) {
    throw UsageError("cannot read provider config " + path.string());
  }
  return parse_provider_config(text, path.string());
}

void backoff_sleep(const RetryPolicy& policy, int attempt_index) {
  auto delay = policy.initial_delay;
  for (int i = 0; i < attempt_index && delay < policy.max_delay; ++i) delay *= 2;
  if (delay > policy.max_delay) delay = policy.max_delay;
  if (policy.sleep) policy.sleep(delay);
  else std::this_thread::sleep_for(delay);
}

namespace {

class HttpBackend {
 public:
  explicit HttpBackend(const ProviderConfig& config) : config_(config) {
    const auto scheme_end = config.base_url.find("://");
    const auto path_start = config.base_url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    origin_ = config.base_url.substr(0, path_start);
    prefix_ = path_start == std::string::npos ? "" : config.base_url.substr(path_start);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
    if (const char* key = std::getenv(kApiKeyVariable)) api_key_ = key;
  }

  // POSTs `body` to prefix + path and returns the parsed JSON response.
  Json post(const std::string& path, const Json& body) const {
    httplib::Client client(origin_);
    if (!client.is_valid()) throw ProviderError("invalid provider base_url '" + config_.base_url + "'");
    const auto timeout = std::chrono::duration<double>(config_.timeout_seconds);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
    auto res = client.Post(prefix_ + path, headers, body.dump(), "application/json");
    if (!res) {
      throw TransientProviderError("request to " + config_.base_url + path + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status == 429 || res->status >= 500) {
      throw TransientProviderError("provider returned HTTP " + std::to_string(res->status));
    }
    if (res->status != 200) {
      throw ProviderError("provider returned HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 300));
    }
    try {
      return Json::parse(res->body);
    } catch (const Json::exception&) {
      throw TransientProviderError("provider returned malformed JSON");
    }
  }

  const ProviderConfig& config() const noexcept { return config_; }

 private:
  ProviderConfig config_;
  std::string origin_;
  std::string prefix_;
  std::string api_key_;
};

std::string string_at(const Json& j, std::initializer_list<const char*> path) {
  const Json* cur = &j;
  for (const char* key : path) {
    if (cur->is_array()) {
      if (cur->empty()) throw TransientProviderError("provider response has no choices");
      cur = &(*cur)[0];
    }
    auto it = cur->find(key);
    if (it == cur->end()) throw TransientProviderError(std::string("provider response lacks '") + key + "'");
    cur = &*it;
  }
  if (!cur->is_string()) throw TransientProviderError("provider response text is not a string");
  return cur->get<std::string>();
}

class HttpCompletionProvider final : public CompletionProvider {
 public:
  explicit HttpCompletionProvider(const ProviderConfig& config) : backend_(config) {}

  std::string complete(const std::string& prompt, const GenerationParams& params) override {
    Json body;
    body["model"] = params.model_id;
    body["temperature"] = params.temperature;
    body["top_p"] = params.top_p;
    if (backend_.config().api == "chat") {
      body["messages"] = Json::array({Json{{"role", "user"}, {"content", prompt}}});
      return string_at(backend_.post("/chat/completions", body), {"choices", "message", "content"});
    }
    body["prompt"] = prompt;
    return string_at(backend_.post("/completions", body), {"choices", "text"});
  }

 private:
  HttpBackend backend_;
};

class HttpEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(const ProviderConfig& config) : backend_(config) {}

  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts, const std::string& model_id) override {
    Json body;
    body["model"] = model_id;
    body["input"] = texts;
    const Json res = backend_.post("/embeddings", body);
    auto data = res.find("data");
    if (data == res.end() || !data->is_array() || data->size() != texts.size()) {
      throw TransientProviderError("embedding response does not match the request");
    }
    std::vector<std::vector<double>> out(texts.size());
    for (const auto& item : *data) {
      const auto index = item.value("index", std::size_t{0});
      if (index >= out.size() || !item.contains("embedding")) throw TransientProviderError("malformed embedding item");
      out[index] = item["embedding"].get<std::vector<double>>();
    }
    return out;
  }

 private:
  HttpBackend backend_;
};

class OfflineCompletionProvider final : public CompletionProvider {
 public:
  std::string complete(const std::string&, const GenerationParams&) override {
    throw ProviderError("offline mode: the generation cache does not cover this request");
  }
};

class OfflineEmbeddingProvider final : public EmbeddingProvider {
 public:
  std::vector<std::vector<double>> embed(const std::vector<std::string>&, const std::string&) override {
    throw ProviderError("offline mode: the embedding cache does not cover this request");
  }
};

}  // namespace

std::shared_ptr<CompletionProvider> make_http_completion_provider(const ProviderConfig& config) {
  return std::make_shared<HttpCompletionProvider>(config);
}

std::shared_ptr<EmbeddingProvider> make_http_embedding_provider(const ProviderConfig& config) {
  return std::make_shared<HttpEmbeddingProvider>(config);
}

std::shared_ptr<CompletionProvider> make_offline_completion_provider() {
  return std::make_shared<OfflineCompletionProvider>();
}

std::shared_ptr<EmbeddingProvider> make_offline_embedding_provider() {
  return std::make_shared<OfflineEmbeddingProvider>();
}

}  // namespace divref::diversifier
