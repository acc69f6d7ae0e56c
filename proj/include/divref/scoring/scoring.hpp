#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "divref/corpus/types.hpp"
#include "divref/metrics/cider.hpp"
#include "divref/metrics/metric.hpp"
#include "divref/scoring/score_dump.hpp"

namespace divref::scoring {

struct ScoringOptions {
  metrics::MetricConfig metric{};
  metrics::Aggregation aggregation = metrics::Aggregation::max;
  bool include_filtered = false;
  // Use only the first n diversified entries (provenance order) of each
  // reference set; nullopt uses all of them.
  std::optional<std::size_t> max_diversified;
  std::size_t jobs = 1;
};

// References of one set as scored: ground truth, then the first
// `max_diversified` unfiltered diversified entries.
std::vector<std::string> scoring_references(const corpus::ReferenceSet& refs, bool include_filtered,
                                            std::optional<std::size_t> max_diversified);

// idf documents for CIDEr: the ground truth and human-provenance entries of
// every reference set. Diversified LLM entries never contribute.
std::shared_ptr<const metrics::CiderIdf> cider_idf_for(const corpus::Benchmark& benchmark,
                                                       const metrics::CiderParams& params = {});

// One record per system output, in benchmark output order. Scoring runs on
// `jobs` threads and the result does not depend on the thread count.
std::vector<ScoreRecord> score_benchmark(const corpus::Benchmark& benchmark, const ScoringOptions& options);

// Per-reference scores of every system output against all (unfiltered)
// references, in benchmark output order; entry 0 is the ground truth.
std::vector<std::vector<double>> per_reference_table(const corpus::Benchmark& benchmark,
                                                     const metrics::MetricConfig& metric, bool include_filtered,
                                                     std::size_t jobs);

}  // namespace divref::scoring
