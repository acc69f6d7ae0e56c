#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "divref/corpus/types.hpp"
#include "divref/diversifier/diversifier.hpp"
#include "divref/metaeval/suite.hpp"
#include "divref/pipeline/config.hpp"

namespace divref::pipeline {

// Providers used by the pipeline. Null members are built from the config
// (HTTP when a provider config is given and the run is not offline,
// otherwise the offline provider).
struct Providers {
  std::shared_ptr<diversifier::CompletionProvider> completion;
  std::shared_ptr<diversifier::CompletionProvider> judge;
  diversifier::GenerateOptions generate{};
};

// Evaluation levels that apply to a benchmark's task and judgments.
std::vector<metaeval::Level> levels_for(const corpus::Benchmark& benchmark);

// Loads the benchmark and fills the generation requests of `config` from the
// cache (or the provider), returning the merged benchmark.
struct PreparedBenchmark {
  corpus::Benchmark original;
  std::vector<corpus::DiversifiedRecord> generations;
  corpus::Benchmark merged;
};
PreparedBenchmark prepare_benchmark(const RunConfig& config, Providers providers, int n_generations);

// ingest -> diversify -> (filter) -> score -> metaeval. Writes into
// output_dir:
//   benchmark.jsonl, generations.jsonl, scores.single.jsonl,
//   scores.divref.jsonl, reports.single.jsonl, reports.divref.jsonl,
//   report.txt, manifest.json
// Errors name the failing stage; outputs of earlier stages stay on disk.
std::filesystem::path run_pipeline(const RunConfig& config, Providers providers = {});

// Single-Ref vs Div-Ref rows per (metric, setting, statistic).
std::string format_comparison_table(std::span<const metaeval::CorrelationReport> single,
                                    std::span<const metaeval::CorrelationReport> divref);

struct SweepRow {
  int n = 0;
  std::string metric;
  std::string setting;
  // A correlation statistic name, or "mean_segment_score".
  std::string statistic;
  double value = 0.0;
};

// For each n, scores with the ground truth plus the first n diversified
// entries and reruns meta-evaluation. Per-reference scores are computed once
// for max/mean; builtin rescoring happens per n. Offline runs need
// max(n_values) cached generations per segment.
std::vector<SweepRow> sweep_reference_count(const RunConfig& config, std::span<const int> n_values,
                                            Providers providers = {});
void write_sweep(std::span<const SweepRow> rows, std::ostream& out);
std::string format_sweep_table(std::span<const SweepRow> rows);

}  // namespace divref::pipeline
