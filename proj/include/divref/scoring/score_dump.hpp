#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace divref::scoring {

// One line of a score dump: the score of one system output under one metric.
struct ScoreRecord {
  std::string metric;
  std::string system;
  std::string segment;
  double value = 0.0;
  std::vector<double> per_reference;
  std::string aggregation;

  bool operator==(const ScoreRecord&) const = default;
};

// {"metric","system","segment","value","per_reference","aggregation"}.
// Doubles are written with round-trip precision, so equal inputs give
// byte-identical dumps.
void write_score_dump(std::span<const ScoreRecord> records, std::ostream& out);
void save_score_dump(std::span<const ScoreRecord> records, const std::filesystem::path& path);
std::vector<ScoreRecord> read_score_dump(std::istream& in, const std::string& origin);
std::vector<ScoreRecord> load_score_dump(const std::filesystem::path& path);
// Concatenation of several dump files, in argument order.
std::vector<ScoreRecord> load_score_dumps(std::span<const std::filesystem::path> paths);

}  // namespace divref::scoring
