#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "divref/corpus/types.hpp"
#include "divref/scoring/score_dump.hpp"

namespace divref::metaeval {

enum class Level { segment, system, sample, preference };
enum class Statistic { kendall_tau_b, spearman, pairwise_accuracy, preference_accuracy };

Level parse_level(std::string_view s);
std::string_view to_string(Level l) noexcept;
std::string_view to_string(Statistic s) noexcept;

struct CorrelationReport {
  std::string metric_id;
  // Language pair, aspect, preference setting, or "all".
  std::string setting;
  Statistic statistic = Statistic::kendall_tau_b;
  double value = 0.0;
  std::size_t n_items = 0;
  std::size_t n_excluded = 0;

  bool operator==(const CorrelationReport&) const = default;
};

struct SuiteOptions {
  // Segment level: tau per system, then averaged over systems, instead of
  // one tau over all pooled (system, segment) pairs.
  bool per_system_segment_tau = false;
  std::size_t jobs = 1;
};

// segment:    Kendall tau-b per language pair over segment_score judgments.
// system:     pairwise accuracy per language pair, plus "all" pooling the
//             pairs of every language pair. Human system scores come from
//             system_score judgments, else the mean segment score.
// sample:     per aspect, Spearman across systems within each document,
//             averaged over documents. Documents where either side is
//             all-tied are excluded and counted.
// preference: accuracy per setting (HC/HI/HM/MM).
// Reports are ordered by metric (first appearance in the dumps), then
// setting. DataError enumerates judged items missing from the dumps.
std::vector<CorrelationReport> correlation_suite(const corpus::Benchmark& benchmark,
                                                 std::span<const scoring::ScoreRecord> scores, Level level,
                                                 const SuiteOptions& options = {});

void write_reports(std::span<const CorrelationReport> reports, std::ostream& out);
std::vector<CorrelationReport> read_reports(std::istream& in, const std::string& origin);
// Fixed-width table, one row per report.
std::string format_report_table(std::span<const CorrelationReport> reports);

}  // namespace divref::metaeval
