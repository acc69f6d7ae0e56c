#include "divref/scoring/scoring.hpp"

#include <unordered_map>

#include "divref/aggregation/aggregation.hpp"
#include "divref/error.hpp"
#include "divref/metrics/scorer.hpp"
#include "divref/util/parallel.hpp"

namespace divref::scoring {

std::vector<std::string> scoring_references(const corpus::ReferenceSet& refs, bool include_filtered,
                                            std::optional<std::size_t> max_diversified) {
  std::vector<std::string> out{refs.ground_truth};
  std::size_t taken = 0;
  for (const auto& e : refs.diversified) {
    if (max_diversified && taken >= *max_diversified) break;
    if (e.filtered.value_or(false) && !include_filtered) continue;
    out.push_back(e.text);
    ++taken;
  }
  return out;
}

std::shared_ptr<const metrics::CiderIdf> cider_idf_for(const corpus::Benchmark& benchmark,
                                                       const metrics::CiderParams& params) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(benchmark.reference_sets.size());
  for (const auto& r : benchmark.reference_sets) {
    std::vector<std::string> doc{r.ground_truth};
    for (const auto& e : r.diversified) {
      if (std::holds_alternative<corpus::HumanProvenance>(e.provenance)) doc.push_back(e.text);
    }
    docs.push_back(std::move(doc));
  }
  return std::make_shared<const metrics::CiderIdf>(docs, params);
}

namespace {

std::unique_ptr<metrics::Scorer> scorer_for(const corpus::Benchmark& benchmark, const metrics::MetricConfig& metric) {
  metric.validate();
  std::shared_ptr<const metrics::CiderIdf> idf;
  if (metric.metric_id == metrics::MetricId::cider) idf = cider_idf_for(benchmark, metric.cider);
  return metrics::make_scorer(metric, idf);
}

std::vector<const corpus::ReferenceSet*> reference_sets_by_output(const corpus::Benchmark& benchmark) {
  std::unordered_map<std::string, const corpus::ReferenceSet*> by_segment;
  for (const auto& r : benchmark.reference_sets) by_segment.emplace(r.segment_id, &r);
  std::vector<const corpus::ReferenceSet*> out;
  out.reserve(benchmark.system_outputs.size());
  for (const auto& o : benchmark.system_outputs) {
    auto it = by_segment.find(o.segment_id);
    if (it == by_segment.end()) throw DataError("output for segment '" + o.segment_id + "' has no reference set");
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

std::vector<ScoreRecord> score_benchmark(const corpus::Benchmark& benchmark, const ScoringOptions& options) {
  aggregation::check_strategy(options.metric.metric_id, options.aggregation);
  const auto scorer = scorer_for(benchmark, options.metric);
  const auto refsets = reference_sets_by_output(benchmark);
  const std::string metric_name(metrics::to_string(options.metric.metric_id));
  std::vector<ScoreRecord> out(benchmark.system_outputs.size());
  util::parallel_for(out.size(), options.jobs, [&](std::size_t i) {
    const auto& o = benchmark.system_outputs[i];
    const auto refs = scoring_references(*refsets[i], options.include_filtered, options.max_diversified);
    const auto s = aggregation::score_with_references(*scorer, o.hypothesis, refs, options.aggregation);
    out[i] = ScoreRecord{metric_name, o.system_id, o.segment_id, s.value, s.per_reference,
                         std::string(metrics::to_string(s.aggregation_used))};
  });
  return out;
}

std::vector<std::vector<double>> per_reference_table(const corpus::Benchmark& benchmark,
                                                     const metrics::MetricConfig& metric, bool include_filtered,
                                                     std::size_t jobs) {
  const auto scorer = scorer_for(benchmark, metric);
  const auto refsets = reference_sets_by_output(benchmark);
  std::vector<std::vector<double>> out(benchmark.system_outputs.size());
  util::parallel_for(out.size(), jobs, [&](std::size_t i) {
    const auto refs = scoring_references(*refsets[i], include_filtered, std::nullopt);
    out[i] = scorer->per_reference(benchmark.system_outputs[i].hypothesis, refs);
  });
  return out;
}

}  // namespace divref::scoring
