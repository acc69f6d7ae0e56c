#include "divref/pipeline/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "divref/aggregation/aggregation.hpp"
#include "divref/corpus/io.hpp"
#include "divref/error.hpp"
#include "divref/scoring/scoring.hpp"
#include "divref/util/digest.hpp"
#include "divref/util/jsonl.hpp"

namespace divref::pipeline {

using corpus::JudgmentKind;
using metaeval::CorrelationReport;
using metaeval::Level;

namespace {

// Runs `fn`, prefixing any toolkit error with the stage name.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  const std::string prefix = std::string("stage '") + name + "': ";
  try {
    return fn();
  } catch (const ProviderError& e) {
    throw ProviderError(prefix + e.what(), e.missing_keys());
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  } catch (const UsageError& e) {
    throw UsageError(prefix + e.what());
  }
}

struct ResolvedProviders {
  std::shared_ptr<diversifier::CompletionProvider> completion;
  std::shared_ptr<diversifier::CompletionProvider> judge;
  diversifier::GenerationParams params;
  diversifier::GenerationParams judge_params;
  diversifier::GenerateOptions options;
};

ResolvedProviders resolve_providers(const RunConfig& config, Providers given) {
  ResolvedProviders r;
  r.options = given.generate;
  diversifier::ProviderConfig pc;
  if (config.provider_config) pc = diversifier::load_provider_config(*config.provider_config);
  r.params = pc.generation_params();
  r.judge_params = pc.judge_params();
  if (config.provider_config) {
    r.options.max_concurrency = pc.max_concurrency;
    r.options.retry.max_attempts = pc.max_attempts;
  }
  const bool networked = config.provider_config && !config.offline;
  r.completion = given.completion ? given.completion
                                  : (networked ? diversifier::make_http_completion_provider(pc)
                                               : diversifier::make_offline_completion_provider());
  r.judge = given.judge ? given.judge : r.completion;
  return r;
}

std::vector<scoring::ScoreRecord> score_all(const corpus::Benchmark& b, const RunConfig& config,
                                            metrics::Aggregation agg, std::optional<std::size_t> max_div) {
  std::vector<scoring::ScoreRecord> out;
  for (auto id : config.metrics) {
    scoring::ScoringOptions o;
    o.metric.metric_id = id;
    o.aggregation = agg;
    o.include_filtered = config.include_filtered;
    o.max_diversified = max_div;
    o.jobs = config.jobs;
    auto part = scoring::score_benchmark(b, o);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

std::vector<CorrelationReport> evaluate(const corpus::Benchmark& b, std::span<const scoring::ScoreRecord> scores,
                                        const RunConfig& config) {
  metaeval::SuiteOptions o;
  o.per_system_segment_tau = config.per_system_segment_tau;
  o.jobs = config.jobs;
  std::vector<CorrelationReport> out;
  for (auto level : levels_for(b)) {
    auto part = metaeval::correlation_suite(b, scores, level, o);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::string dump_text(std::span<const scoring::ScoreRecord> scores) {
  std::ostringstream out;
  scoring::write_score_dump(scores, out);
  return out.str();
}

std::string reports_text(std::span<const CorrelationReport> reports) {
  std::ostringstream out;
  metaeval::write_reports(reports, out);
  return out.str();
}

}  // namespace

std::vector<Level> levels_for(const corpus::Benchmark& b) {
  std::set<JudgmentKind> kinds;
  for (const auto& j : b.human_judgments) kinds.insert(j.kind);
  std::vector<Level> out;
  if (kinds.count(JudgmentKind::segment_score)) out.push_back(Level::segment);
  if (kinds.count(JudgmentKind::segment_score) || kinds.count(JudgmentKind::system_score)) out.push_back(Level::system);
  if (kinds.count(JudgmentKind::aspect_score)) out.push_back(Level::sample);
  if (kinds.count(JudgmentKind::pairwise_preference)) out.push_back(Level::preference);
  if (out.empty()) throw DataError("benchmark has no human judgments to evaluate against");
  return out;
}

PreparedBenchmark prepare_benchmark(const RunConfig& config, Providers given, int n_generations) {
  PreparedBenchmark p;
  p.original = stage("ingest", [&] { return corpus::load_benchmark(config.benchmark, config.format); });
  auto providers = stage("diversify", [&] { return resolve_providers(config, given); });
  p.generations = stage("diversify", [&] {
    diversifier::GenerationCache cache(config.cache_path());
    return diversifier::generate_diversified(p.original, config.prompt_set, n_generations, providers.params,
                                             *providers.completion, cache, providers.options);
  });
  if (config.filter && !p.generations.empty()) {
    p.generations = stage("filter", [&] {
      diversifier::AnswerCache answers(config.cache_path().string() + ".judge");
      return diversifier::filter_subpar(p.generations, p.original.reference_sets, *providers.judge,
                                        providers.judge_params, providers.options, &answers)
          .records;
    });
  }
  p.merged = stage("merge", [&] { return corpus::merge_diversified(p.original, p.generations); });
  return p;
}

std::filesystem::path run_pipeline(const RunConfig& config, Providers providers) {
  config.validate();
  const auto& dir = config.output_dir;
  std::filesystem::create_directories(dir);
  auto prepared = prepare_benchmark(config, std::move(providers), config.n_references);

  std::map<std::string, std::string> files;
  auto emit = [&](const std::string& name, const std::string& content) {
    util::write_file(dir / name, content);
    files[name] = util::sha256_hex(content);
  };
  {
    std::ostringstream out;
    corpus::write_native(prepared.merged, out);
    emit("benchmark.jsonl", out.str());
    std::ostringstream gen;
    corpus::write_records(prepared.generations, gen);
    emit("generations.jsonl", gen.str());
  }

  const auto single = stage("score", [&] { return score_all(prepared.merged, config, metrics::Aggregation::single, 0); });
  emit("scores.single.jsonl", dump_text(single));
  const auto divref = stage("score", [&] {
    return score_all(prepared.merged, config, config.aggregation, static_cast<std::size_t>(config.n_references));
  });
  emit("scores.divref.jsonl", dump_text(divref));

  const auto single_reports = stage("metaeval", [&] { return evaluate(prepared.merged, single, config); });
  emit("reports.single.jsonl", reports_text(single_reports));
  const auto divref_reports = stage("metaeval", [&] { return evaluate(prepared.merged, divref, config); });
  emit("reports.divref.jsonl", reports_text(divref_reports));

  std::string table = "benchmark: " + prepared.original.name + "\n";
  table += "task: " + std::string(corpus::to_string(prepared.original.task)) + "\n";
  table += "references: 1 ground truth + " + std::to_string(config.n_references) + " diversified (" +
           std::string(diversifier::to_string(config.prompt_set)) + " prompts, " +
           std::string(metrics::to_string(config.aggregation)) + " aggregation)\n\n";
  table += format_comparison_table(single_reports, divref_reports);
  emit("report.txt", table);

  nlohmann::ordered_json manifest;
  nlohmann::ordered_json cfg;
  std::istringstream cfg_lines(config.to_text());
  for (std::string line; std::getline(cfg_lines, line);) {
    const auto eq = line.find('=');
    cfg[line.substr(0, eq)] = line.substr(eq + 1);
  }
  manifest["config"] = cfg;
  manifest["inputs"]["benchmark"] = util::sha256_file(config.benchmark);
  manifest["outputs"] = files;
  manifest["counts"]["segments"] = prepared.original.segments.size();
  manifest["counts"]["system_outputs"] = prepared.original.system_outputs.size();
  manifest["counts"]["generations"] = prepared.generations.size();
  util::write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return dir;
}

std::string format_comparison_table(std::span<const CorrelationReport> single,
                                    std::span<const CorrelationReport> divref) {
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, double> base;
  for (const auto& r : single) base[{r.metric_id, r.setting, std::string(metaeval::to_string(r.statistic))}] = r.value;
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %-12s %-20s %10s %10s %9s\n", "metric", "setting", "statistic",
                "Single-Ref", "Div-Ref", "delta");
  out += line;
  for (const auto& r : divref) {
    const Key k{r.metric_id, r.setting, std::string(metaeval::to_string(r.statistic))};
    auto it = base.find(k);
    if (it == base.end()) {
      std::snprintf(line, sizeof line, "%-10s %-12s %-20s %10s %10.4f %9s\n", r.metric_id.c_str(), r.setting.c_str(),
                    std::get<2>(k).c_str(), "-", r.value, "-");
    } else {
      std::snprintf(line, sizeof line, "%-10s %-12s %-20s %10.4f %10.4f %+9.4f\n", r.metric_id.c_str(),
                    r.setting.c_str(), std::get<2>(k).c_str(), it->second, r.value, r.value - it->second);
    }
    out += line;
  }
  return out;
}

std::vector<SweepRow> sweep_reference_count(const RunConfig& config, std::span<const int> n_values,
                                            Providers providers) {
  config.validate();
  if (n_values.empty()) throw UsageError("sweep needs at least one n value");
  for (int n : n_values) {
    if (n < 0 || n > 100) throw UsageError("sweep n values must be in 0..100");
  }
  const int max_n = *std::max_element(n_values.begin(), n_values.end());
  const auto prepared = prepare_benchmark(config, std::move(providers), max_n);
  const auto& b = prepared.merged;

  // Per-reference tables, one per metric, computed once.
  std::vector<std::vector<std::vector<double>>> tables;
  const bool reuse = config.aggregation != metrics::Aggregation::builtin;
  if (reuse) {
    for (auto id : config.metrics) {
      metrics::MetricConfig mc;
      mc.metric_id = id;
      tables.push_back(stage("score", [&] { return scoring::per_reference_table(b, mc, config.include_filtered, config.jobs); }));
    }
  }

  std::vector<SweepRow> rows;
  for (int n : n_values) {
    std::vector<scoring::ScoreRecord> scores;
    if (reuse) {
      for (std::size_t m = 0; m < config.metrics.size(); ++m) {
        const std::string name(metrics::to_string(config.metrics[m]));
        for (std::size_t i = 0; i < b.system_outputs.size(); ++i) {
          const auto& all = tables[m][i];
          const std::vector<double> prefix(all.begin(), all.begin() + std::min<std::ptrdiff_t>(n + 1, static_cast<std::ptrdiff_t>(all.size())));
          scores.push_back({name, b.system_outputs[i].system_id, b.system_outputs[i].segment_id,
                            aggregation::aggregate(prefix, config.aggregation), prefix,
                            std::string(metrics::to_string(config.aggregation))});
        }
      }
    } else {
      scores = stage("score", [&] { return score_all(b, config, config.aggregation, static_cast<std::size_t>(n)); });
    }
    std::map<std::string, std::pair<double, std::size_t>> means;
    for (const auto& s : scores) {
      means[s.metric].first += s.value;
      means[s.metric].second += 1;
    }
    for (auto id : config.metrics) {
      const std::string name(metrics::to_string(id));
      rows.push_back({n, name, "all", "mean_segment_score", means[name].first / static_cast<double>(means[name].second)});
    }
    const auto reports = stage("metaeval", [&] { return evaluate(b, scores, config); });
    for (const auto& r : reports) {
      rows.push_back({n, r.metric_id, r.setting, std::string(metaeval::to_string(r.statistic)), r.value});
    }
  }
  return rows;
}

void write_sweep(std::span<const SweepRow> rows, std::ostream& out) {
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["metric"] = r.metric;
    j["setting"] = r.setting;
    j["statistic"] = r.statistic;
    j["value"] = r.value;
    util::write_jsonl_line(out, j);
  }
}

std::string format_sweep_table(std::span<const SweepRow> rows) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%4s %-10s %-12s %-20s %10s\n", "n", "metric", "setting", "statistic", "value");
  out += line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%4d %-10s %-12s %-20s %10.4f\n", r.n, r.metric.c_str(), r.setting.c_str(),
                  r.statistic.c_str(), r.value);
    out += line;
  }
  return out;
}

}  // namespace divref::pipeline
