#include "divref/external/external.hpp"

#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include "divref/aggregation/aggregation.hpp"
#include "divref/error.hpp"
#include "divref/scoring/scoring.hpp"
#include "divref/util/jsonl.hpp"

namespace divref::external {

std::vector<ExternalScoreRecord> read_external_scores(std::istream& in, const std::string& origin,
                                                      const corpus::Benchmark* benchmark, bool include_filtered) {
  std::unordered_map<std::string, std::size_t> ref_counts;
  std::set<std::pair<std::string, std::string>> outputs;
  if (benchmark) {
    for (const auto& r : benchmark->reference_sets) {
      ref_counts[r.segment_id] = scoring::scoring_references(r, include_filtered, std::nullopt).size();
    }
    for (const auto& o : benchmark->system_outputs) outputs.emplace(o.system_id, o.segment_id);
  }
  std::vector<ExternalScoreRecord> out;
  std::set<std::tuple<std::string, std::string, std::string, std::size_t>> seen;
  util::read_jsonl(in, origin, [&](std::size_t, const util::Json& obj) {
    ExternalScoreRecord r;
    r.metric_id = util::require_string(obj, "metric_id");
    r.system_id = util::require_string(obj, "system_id");
    r.segment_id = util::require_string(obj, "segment_id");
    const auto index = util::require_integer(obj, "reference_index");
    if (index < 0) throw DataError("reference_index must be >= 0");
    r.reference_index = static_cast<std::size_t>(index);
    r.value = util::require_number(obj, "value");
    const std::string key = "(" + r.metric_id + ", " + r.system_id + ", " + r.segment_id + ", " +
                            std::to_string(r.reference_index) + ")";
    if (!seen.emplace(r.metric_id, r.system_id, r.segment_id, r.reference_index).second) {
      throw DataError("duplicate external score " + key);
    }
    if (benchmark) {
      auto it = ref_counts.find(r.segment_id);
      if (it == ref_counts.end()) throw DataError("external score " + key + " names unknown segment");
      if (!outputs.count({r.system_id, r.segment_id})) throw DataError("external score " + key + " names unknown system output");
      if (r.reference_index >= it->second) {
        throw DataError("external score " + key + ": reference_index out of range (segment has " +
                        std::to_string(it->second) + " references)");
      }
    }
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<ExternalScoreRecord> load_external_scores(const std::filesystem::path& path,
                                                      const corpus::Benchmark* benchmark, bool include_filtered) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_external_scores(in, path.string(), benchmark, include_filtered);
}

std::vector<scoring::ScoreRecord> aggregate_external(std::span<const ExternalScoreRecord> records,
                                                     metrics::Aggregation strategy) {
  if (strategy != metrics::Aggregation::max && strategy != metrics::Aggregation::mean) {
    throw UsageError("external scores support only max or mean aggregation");
  }
  using Key = std::tuple<std::string, std::string, std::string>;
  std::vector<Key> order;
  std::map<Key, std::map<std::size_t, double>> groups;
  for (const auto& r : records) {
    Key k{r.metric_id, r.system_id, r.segment_id};
    auto [it, inserted] = groups.try_emplace(k);
    if (inserted) order.push_back(k);
    if (!it->second.emplace(r.reference_index, r.value).second) {
      throw DataError("duplicate external score for reference " + std::to_string(r.reference_index));
    }
  }
  std::vector<scoring::ScoreRecord> out;
  out.reserve(order.size());
  for (const auto& k : order) {
    const auto& by_index = groups.at(k);
    if (!by_index.count(0)) {
      throw DataError("external scores for (" + std::get<0>(k) + ", " + std::get<1>(k) + ", " + std::get<2>(k) +
                      ") lack the ground-truth record (reference_index 0)");
    }
    std::vector<double> values;
    for (const auto& [i, v] : by_index) values.push_back(v);
    const double value = aggregation::aggregate(values, strategy);
    out.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), value, values,
                   std::string(metrics::to_string(strategy))});
  }
  return out;
}

}  // namespace divref::external
