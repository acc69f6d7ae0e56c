#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "divref/corpus/io.hpp"
#include "divref/diversifier/prompts.hpp"
#include "divref/metrics/metric.hpp"

namespace divref::pipeline {

// Run configuration, read from a key=value file ('#' starts a comment).
// Relative paths are resolved against the config file's directory.
//
//   benchmark        path (required)
//   format           wmt | summeval | pascal50s | native   (native)
//   prompt_set       diverse | basic | multilingual         (diverse)
//   n_references     0..100                                 (10)
//   metrics          comma-separated metric ids             (bleu,chrf)
//   aggregation      max | mean | builtin                   (max)
//   provider_config  path                                   (none: offline only)
//   output_dir       path                                   (out)
//   cache            path                                   (<output_dir>/cache.jsonl)
//   seed             integer                                (0)
//   offline          true | false                           (false)
//   jobs             integer >= 1                           (1)
//   filter           true | false: run the judge filter     (false)
//   include_filtered true | false                           (false)
//   segment_tau      pooled | per_system                    (pooled)
struct RunConfig {
  std::filesystem::path benchmark;
  corpus::Format format = corpus::Format::native;
  diversifier::PromptSet prompt_set = diversifier::PromptSet::diverse;
  int n_references = 10;
  std::vector<metrics::MetricId> metrics{metrics::MetricId::bleu, metrics::MetricId::chrf};
  metrics::Aggregation aggregation = metrics::Aggregation::max;
  std::optional<std::filesystem::path> provider_config;
  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> cache;
  std::uint64_t seed = 0;
  bool offline = false;
  std::size_t jobs = 1;
  bool filter = false;
  bool include_filtered = false;
  bool per_system_segment_tau = false;

  std::filesystem::path cache_path() const { return cache ? *cache : output_dir / "cache.jsonl"; }
  // UsageError on out-of-range values.
  void validate() const;
  // Canonical key=value text (sorted keys, resolved paths as given).
  std::string to_text() const;
};

RunConfig parse_run_config(const std::string& text, const std::string& origin,
                           const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

std::vector<metrics::MetricId> parse_metric_list(std::string_view list);

}  // namespace divref::pipeline
