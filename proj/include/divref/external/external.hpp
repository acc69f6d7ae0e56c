#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "divref/corpus/types.hpp"
#include "divref/metrics/metric.hpp"
#include "divref/scoring/score_dump.hpp"

namespace divref::external {

// A score computed outside the toolkit for one (hypothesis, reference) pair.
// reference_index 0 is the ground truth.
struct ExternalScoreRecord {
  std::string metric_id;
  std::string system_id;
  std::string segment_id;
  std::size_t reference_index = 0;
  double value = 0.0;

  bool operator==(const ExternalScoreRecord&) const = default;
};

// Parses {"metric_id","system_id","segment_id","reference_index","value"}
// lines. DataError on malformed lines and duplicate keys. When a benchmark is
// given, ids must resolve and reference_index must be inside the segment's
// reference set (ground truth plus unfiltered diversified entries unless
// `include_filtered`).
std::vector<ExternalScoreRecord> read_external_scores(std::istream& in, const std::string& origin,
                                                      const corpus::Benchmark* benchmark = nullptr,
                                                      bool include_filtered = false);
std::vector<ExternalScoreRecord> load_external_scores(const std::filesystem::path& path,
                                                      const corpus::Benchmark* benchmark = nullptr,
                                                      bool include_filtered = false);

// Groups by (metric, system, segment) in first-appearance order, orders each
// group's values by reference_index and aggregates them. Only max and mean
// are accepted. DataError when a group lacks its reference_index 0 record.
std::vector<scoring::ScoreRecord> aggregate_external(std::span<const ExternalScoreRecord> records,
                                                     metrics::Aggregation strategy);

}  // namespace divref::external
