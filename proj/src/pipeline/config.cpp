#include "divref/pipeline/config.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "divref/error.hpp"
#include "divref/text/unicode.hpp"
#include "divref/util/jsonl.hpp"

namespace divref::pipeline {

namespace {

bool parse_bool(const std::string& key, const std::string& v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw UsageError(where + ": '" + key + "' expects true or false, got '" + v + "'");
}

long long parse_int(const std::string& key, const std::string& v, const std::string& where) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw UsageError(where + ": '" + key + "' expects an integer, got '" + v + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& v) {
  std::filesystem::path p(v);
  return p.is_absolute() || base.empty() ? p : base / p;
}

std::string format_name(corpus::Format f) {
  switch (f) {
    case corpus::Format::wmt: return "wmt";
    case corpus::Format::summeval: return "summeval";
    case corpus::Format::pascal50s: return "pascal50s";
    case corpus::Format::native: return "native";
  }
  return "native";
}

}  // namespace

std::vector<metrics::MetricId> parse_metric_list(std::string_view list) {
  std::vector<metrics::MetricId> out;
  std::string item;
  std::istringstream in{std::string(list)};
  while (std::getline(in, item, ',')) {
    const std::string name(text::trim(item));
    if (name.empty()) continue;
    const auto id = metrics::parse_metric_id(name);
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  }
  return out;
}

void RunConfig::validate() const {
  if (benchmark.empty()) throw UsageError("config: 'benchmark' is required");
  if (n_references < 0 || n_references > 100) throw UsageError("config: n_references must be in 0..100");
  if (metrics.empty()) throw UsageError("config: metrics must not be empty");
  if (aggregation == metrics::Aggregation::single) throw UsageError("config: aggregation must be max, mean or builtin");
  if (jobs < 1) throw UsageError("config: jobs must be >= 1");
}

std::string RunConfig::to_text() const {
  std::map<std::string, std::string> kv;
  kv["benchmark"] = benchmark.generic_string();
  kv["format"] = format_name(format);
  kv["prompt_set"] = std::string(diversifier::to_string(prompt_set));
  kv["n_references"] = std::to_string(n_references);
  std::string m;
  for (auto id : metrics) m += (m.empty() ? "" : ",") + std::string(metrics::to_string(id));
  kv["metrics"] = m;
  kv["aggregation"] = std::string(metrics::to_string(aggregation));
  kv["seed"] = std::to_string(seed);
  kv["filter"] = filter ? "true" : "false";
  kv["include_filtered"] = include_filtered ? "true" : "false";
  kv["segment_tau"] = per_system_segment_tau ? "per_system" : "pooled";
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

RunConfig parse_run_config(const std::string& text, const std::string& origin, const std::filesystem::path& base) {
  RunConfig c;
  bool saw_output = false;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body(text::trim(line.substr(0, line.find('#'))));
    if (body.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw UsageError(where + ": expected key=value");
    const std::string key(text::trim(body.substr(0, eq)));
    const std::string v(text::trim(body.substr(eq + 1)));
    if (key == "benchmark") c.benchmark = resolve(base, v);
    else if (key == "format") c.format = corpus::parse_format(v);
    else if (key == "prompt_set") c.prompt_set = diversifier::parse_prompt_set(v);
    else if (key == "n_references") c.n_references = static_cast<int>(parse_int(key, v, where));
    else if (key == "metrics") c.metrics = parse_metric_list(v);
    else if (key == "aggregation") c.aggregation = metrics::parse_aggregation(v);
    else if (key == "provider_config") c.provider_config = resolve(base, v);
    else if (key == "output_dir") { c.output_dir = resolve(base, v); saw_output = true; }
    else if (key == "cache") c.cache = resolve(base, v);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(key, v, where));
    else if (key == "offline") c.offline = parse_bool(key, v, where);
    else if (key == "jobs") c.jobs = static_cast<std::size_t>(std::max(1LL, parse_int(key, v, where)));
    else if (key == "filter") c.filter = parse_bool(key, v, where);
    else if (key == "include_filtered") c.include_filtered = parse_bool(key, v, where);
    else if (key == "segment_tau") {
      if (v != "pooled" && v != "per_system") throw UsageError(where + ": segment_tau must be pooled or per_system");
      c.per_system_segment_tau = v == "per_system";
    } else {
      throw UsageError(where + ": unknown key '" + key + "'");
    }
  }
  if (!saw_output) c.output_dir = resolve(base, "out");
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = util::read_file(path);
  } catch (const DataError&) {
    throw UsageError("cannot read config " + path.string());
  }
  return parse_run_config(text, path.string(), path.parent_path());
}

}  // namespace divref::pipeline
