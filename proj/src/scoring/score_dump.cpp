#include "divref/scoring/score_dump.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "divref/error.hpp"
#include "divref/util/jsonl.hpp"

namespace divref::scoring {

void write_score_dump(std::span<const ScoreRecord> records, std::ostream& out) {
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["metric"] = r.metric;
    j["system"] = r.system;
    j["segment"] = r.segment;
    j["value"] = r.value;
    j["per_reference"] = r.per_reference;
    j["aggregation"] = r.aggregation;
    util::write_jsonl_line(out, j);
  }
}

void save_score_dump(std::span<const ScoreRecord> records, const std::filesystem::path& path) {
  std::ostringstream out;
  write_score_dump(records, out);
  util::write_file(path, out.str());
}

std::vector<ScoreRecord> read_score_dump(std::istream& in, const std::string& origin) {
  std::vector<ScoreRecord> out;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  util::read_jsonl(in, origin, [&](std::size_t, const util::Json& obj) {
    ScoreRecord r;
    r.metric = util::require_string(obj, "metric");
    r.system = util::require_string(obj, "system");
    r.segment = util::require_string(obj, "segment");
    r.value = util::require_number(obj, "value");
    if (auto it = obj.find("per_reference"); it != obj.end() && !it->is_null()) {
      if (!it->is_array()) throw DataError("field 'per_reference' must be an array");
      for (const auto& v : *it) {
        if (!v.is_number()) throw DataError("per_reference entries must be numbers");
        r.per_reference.push_back(v.get<double>());
      }
    }
    r.aggregation = obj.contains("aggregation") ? util::require_string(obj, "aggregation") : std::string{};
    if (!seen.emplace(r.metric, r.system, r.segment).second) {
      throw DataError("duplicate score for metric '" + r.metric + "', system '" + r.system + "', segment '" +
                      r.segment + "'");
    }
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<ScoreRecord> load_score_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_score_dump(in, path.string());
}

std::vector<ScoreRecord> load_score_dumps(std::span<const std::filesystem::path> paths) {
  std::vector<ScoreRecord> out;
  for (const auto& p : paths) {
    auto part = load_score_dump(p);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

}  // namespace divref::scoring
