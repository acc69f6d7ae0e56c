#include "divref/metaeval/suite.hpp"

#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

#include "divref/error.hpp"
#include "divref/metaeval/statistics.hpp"
#include "divref/util/jsonl.hpp"
#include "divref/util/parallel.hpp"

namespace divref::metaeval {

using corpus::JudgmentKind;

Level parse_level(std::string_view s) {
  if (s == "segment") return Level::segment;
  if (s == "system") return Level::system;
  if (s == "sample") return Level::sample;
  if (s == "preference") return Level::preference;
  throw UsageError("unknown level '" + std::string(s) + "' (expected segment, system, sample or preference)");
}

std::string_view to_string(Level l) noexcept {
  switch (l) {
    case Level::segment: return "segment";
    case Level::system: return "system";
    case Level::sample: return "sample";
    case Level::preference: return "preference";
  }
  return "?";
}

std::string_view to_string(Statistic s) noexcept {
  switch (s) {
    case Statistic::kendall_tau_b: return "kendall_tau_b";
    case Statistic::spearman: return "spearman";
    case Statistic::pairwise_accuracy: return "pairwise_accuracy";
    case Statistic::preference_accuracy: return "preference_accuracy";
  }
  return "?";
}

namespace {

Statistic parse_statistic(std::string_view s) {
  for (auto st : {Statistic::kendall_tau_b, Statistic::spearman, Statistic::pairwise_accuracy,
                  Statistic::preference_accuracy}) {
    if (s == to_string(st)) return st;
  }
  throw DataError("unknown statistic '" + std::string(s) + "'");
}

std::string all_or(const std::string& s) { return s.empty() ? "all" : s; }

class ScoreTable {
 public:
  ScoreTable(std::span<const scoring::ScoreRecord> scores) {
    for (const auto& r : scores) {
      if (!index_.count(r.metric)) {
        index_.emplace(r.metric, metrics_.size());
        metrics_.push_back(r.metric);
        values_.emplace_back();
      }
      values_[index_.at(r.metric)][key(r.system, r.segment)] = r.value;
    }
  }

  const std::vector<std::string>& metrics() const noexcept { return metrics_; }

  // nullptr when the dump has no score for the item.
  const double* find(std::size_t metric, const std::string& system, const std::string& segment) const {
    const auto& m = values_[metric];
    auto it = m.find(key(system, segment));
    return it == m.end() ? nullptr : &it->second;
  }

  double at(std::size_t metric, const std::string& system, const std::string& segment) const {
    const double* v = find(metric, system, segment);
    if (!v) throw DataError("internal: missing score");
    return *v;
  }

  // Mean over the given segments.
  double system_mean(std::size_t metric, const std::string& system, const std::vector<std::string>& segments) const {
    double sum = 0.0;
    for (const auto& s : segments) sum += at(metric, system, s);
    return sum / static_cast<double>(segments.size());
  }

 private:
  static std::string key(const std::string& system, const std::string& segment) { return system + '\x1f' + segment; }

  std::vector<std::string> metrics_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::unordered_map<std::string, double>> values_;
};

void require_coverage(const ScoreTable& table, const std::vector<std::pair<std::string, std::string>>& items) {
  std::vector<std::string> gaps;
  for (std::size_t m = 0; m < table.metrics().size(); ++m) {
    for (const auto& [system, segment] : items) {
      if (!table.find(m, system, segment)) {
        gaps.push_back(table.metrics()[m] + " / " + system + " / " + segment);
      }
    }
  }
  if (gaps.empty()) return;
  std::string msg = "score dumps do not cover " + std::to_string(gaps.size()) + " judged item(s):";
  for (std::size_t i = 0; i < gaps.size() && i < 20; ++i) msg += "\n  " + gaps[i];
  if (gaps.size() > 20) msg += "\n  ...";
  throw DataError(msg);
}

// One unit of work: a (metric, setting) pair whose report(s) are computed
// independently.
struct Group {
  std::size_t metric = 0;
  std::string setting;
  std::function<std::vector<CorrelationReport>(std::size_t metric, const std::string& metric_id)> run;
};

std::vector<CorrelationReport> run_groups(const ScoreTable& table, std::vector<Group>& groups, std::size_t jobs) {
  std::vector<std::vector<CorrelationReport>> results(groups.size());
  util::parallel_for(groups.size(), jobs, [&](std::size_t i) {
    results[i] = groups[i].run(groups[i].metric, table.metrics()[groups[i].metric]);
  });
  std::vector<CorrelationReport> out;
  for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::map<std::string, const corpus::Segment*> segment_map(const corpus::Benchmark& b) {
  std::map<std::string, const corpus::Segment*> out;
  for (const auto& s : b.segments) out.emplace(s.id, &s);
  return out;
}

std::vector<CorrelationReport> segment_level(const corpus::Benchmark& b, const ScoreTable& table,
                                             const SuiteOptions& options) {
  const auto segments = segment_map(b);
  // setting -> (system, segment, human value)
  std::map<std::string, std::vector<std::tuple<std::string, std::string, double>>> by_lp;
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& j : b.human_judgments) {
    if (j.kind != JudgmentKind::segment_score) continue;
    const auto lp = all_or(segments.at(*j.segment_id)->language_pair.str());
    by_lp[lp].emplace_back(*j.system_id, *j.segment_id, *j.value);
    items.emplace_back(*j.system_id, *j.segment_id);
  }
  if (by_lp.empty()) throw DataError("benchmark has no segment_score judgments");
  require_coverage(table, items);

  std::vector<Group> groups;
  for (std::size_t m = 0; m < table.metrics().size(); ++m) {
    for (const auto& [lp, rows] : by_lp) {
      groups.push_back({m, lp, [&, lp = lp](std::size_t metric, const std::string& metric_id) {
                          const auto& data = by_lp.at(lp);
                          CorrelationReport r{metric_id, lp, Statistic::kendall_tau_b, 0.0, 0, 0};
                          if (!options.per_system_segment_tau) {
                            std::vector<double> x, y;
                            for (const auto& [sys, seg, h] : data) {
                              x.push_back(table.at(metric, sys, seg));
                              y.push_back(h);
                            }
                            r.value = kendall_tau_b(x, y);
                            r.n_items = x.size();
                            return std::vector<CorrelationReport>{r};
                          }
                          std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> per_sys;
                          for (const auto& [sys, seg, h] : data) {
                            per_sys[sys].first.push_back(table.at(metric, sys, seg));
                            per_sys[sys].second.push_back(h);
                          }
                          double sum = 0.0;
                          std::size_t used = 0;
                          for (const auto& [sys, xy] : per_sys) {
                            try {
                              sum += kendall_tau_b(xy.first, xy.second);
                              ++used;
                              r.n_items += xy.first.size();
                            } catch (const DataError&) {
                              ++r.n_excluded;
                            }
                          }
                          if (used == 0) throw DataError("no system in " + lp + " has a defined tau");
                          r.value = sum / static_cast<double>(used);
                          return std::vector<CorrelationReport>{r};
                        }});
    }
  }
  return run_groups(table, groups, options.jobs);
}

std::vector<CorrelationReport> system_level(const corpus::Benchmark& b, const ScoreTable& table,
                                            const SuiteOptions& options) {
  const auto segments = segment_map(b);
  // lp -> segments of that lp (benchmark order) and systems with outputs
  std::map<std::string, std::vector<std::string>> lp_segments;
  for (const auto& s : b.segments) lp_segments[all_or(s.language_pair.str())].push_back(s.id);
  std::map<std::string, std::map<std::string, std::vector<std::string>>> outputs;  // lp -> system -> segments
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& o : b.system_outputs) {
    outputs[all_or(segments.at(o.segment_id)->language_pair.str())][o.system_id].push_back(o.segment_id);
    items.emplace_back(o.system_id, o.segment_id);
  }
  require_coverage(table, items);

  // Human system scores per lp.
  std::map<std::string, std::map<std::string, double>> human;
  std::map<std::string, std::map<std::string, std::pair<double, std::size_t>>> seg_means;
  for (const auto& j : b.human_judgments) {
    if (j.kind == JudgmentKind::system_score) {
      human[all_or(j.language_pair.value_or(""))][*j.system_id] = *j.value;
    } else if (j.kind == JudgmentKind::segment_score) {
      auto& acc = seg_means[all_or(segments.at(*j.segment_id)->language_pair.str())][*j.system_id];
      acc.first += *j.value;
      acc.second += 1;
    }
  }
  for (const auto& [lp, systems] : seg_means) {
    for (const auto& [sys, acc] : systems) {
      human[lp].try_emplace(sys, acc.first / static_cast<double>(acc.second));
    }
  }
  if (human.empty()) throw DataError("benchmark has no system-level human scores");
  for (const auto& [lp, systems] : human) {
    for (const auto& [sys, v] : systems) {
      if (!outputs.count(lp) || !outputs.at(lp).count(sys)) {
        throw DataError("human score for system '" + sys + "' in " + lp + " has no outputs");
      }
    }
  }

  std::vector<Group> groups;
  for (std::size_t m = 0; m < table.metrics().size(); ++m) {
    groups.push_back({m, "", [&](std::size_t metric, const std::string& metric_id) {
                        std::vector<CorrelationReport> out;
                        PairCounts all;
                        for (const auto& [lp, hsys] : human) {
                          std::map<std::string, double> msys;
                          for (const auto& [sys, v] : hsys) msys[sys] = table.system_mean(metric, sys, outputs.at(lp).at(sys));
                          const auto c = pairwise_counts(msys, hsys);
                          all.correct += c.correct;
                          all.evaluated += c.evaluated;
                          all.excluded += c.excluded;
                          if (c.evaluated == 0) throw DataError("pairwise_system_accuracy: zero evaluable pairs in " + lp);
                          out.push_back({metric_id, lp, Statistic::pairwise_accuracy,
                                         static_cast<double>(c.correct) / static_cast<double>(c.evaluated),
                                         c.evaluated, c.excluded});
                        }
                        if (human.size() > 1) {
                          out.push_back({metric_id, "all", Statistic::pairwise_accuracy,
                                         static_cast<double>(all.correct) / static_cast<double>(all.evaluated),
                                         all.evaluated, all.excluded});
                        }
                        return out;
                      }});
  }
  return run_groups(table, groups, options.jobs);
}

std::vector<CorrelationReport> sample_level(const corpus::Benchmark& b, const ScoreTable& table,
                                            const SuiteOptions& options) {
  // aspect -> document -> (system, human)
  std::map<std::string, std::map<std::string, std::vector<std::pair<std::string, double>>>> data;
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& j : b.human_judgments) {
    if (j.kind != JudgmentKind::aspect_score) continue;
    data[std::string(corpus::to_string(*j.aspect))][*j.segment_id].emplace_back(*j.system_id, *j.value);
    items.emplace_back(*j.system_id, *j.segment_id);
  }
  if (data.empty()) throw DataError("benchmark has no aspect_score judgments");
  require_coverage(table, items);

  std::vector<Group> groups;
  for (std::size_t m = 0; m < table.metrics().size(); ++m) {
    for (const auto& [aspect, docs] : data) {
      groups.push_back({m, aspect, [&, aspect = aspect](std::size_t metric, const std::string& metric_id) {
                          CorrelationReport r{metric_id, aspect, Statistic::spearman, 0.0, 0, 0};
                          double sum = 0.0;
                          for (const auto& [doc, rows] : data.at(aspect)) {
                            std::vector<double> x, y;
                            for (const auto& [sys, h] : rows) {
                              x.push_back(table.at(metric, sys, doc));
                              y.push_back(h);
                            }
                            try {
                              sum += spearman(x, y);
                              ++r.n_items;
                            } catch (const DataError&) {
                              ++r.n_excluded;
                            }
                          }
                          if (r.n_items == 0) throw DataError("no document has a defined Spearman for " + aspect);
                          r.value = sum / static_cast<double>(r.n_items);
                          return std::vector<CorrelationReport>{r};
                        }});
    }
  }
  return run_groups(table, groups, options.jobs);
}

std::vector<CorrelationReport> preference_level(const corpus::Benchmark& b, const ScoreTable& table,
                                                const SuiteOptions& options) {
  struct Item {
    std::string segment, a, b;
    int preferred;
  };
  std::map<std::string, std::vector<Item>> data;
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& j : b.human_judgments) {
    if (j.kind != JudgmentKind::pairwise_preference) continue;
    const std::string setting = j.setting ? std::string(corpus::to_string(*j.setting)) : "all";
    data[setting].push_back({*j.segment_id, j.candidates[0], j.candidates[1], *j.preferred_index});
    items.emplace_back(j.candidates[0], *j.segment_id);
    items.emplace_back(j.candidates[1], *j.segment_id);
  }
  if (data.empty()) throw DataError("benchmark has no pairwise_preference judgments");
  require_coverage(table, items);

  std::vector<Group> groups;
  for (std::size_t m = 0; m < table.metrics().size(); ++m) {
    for (const auto& [setting, rows] : data) {
      groups.push_back({m, setting, [&, setting = setting](std::size_t metric, const std::string& metric_id) {
                          std::vector<PreferenceInstance> inst;
                          for (const auto& it : data.at(setting)) {
                            inst.push_back({table.at(metric, it.a, it.segment), table.at(metric, it.b, it.segment),
                                            it.preferred});
                          }
                          const auto acc = preference_accuracy(inst);
                          return std::vector<CorrelationReport>{
                              {metric_id, setting, Statistic::preference_accuracy, acc.value, acc.n_items, 0}};
                        }});
    }
  }
  return run_groups(table, groups, options.jobs);
}

}  // namespace

std::vector<CorrelationReport> correlation_suite(const corpus::Benchmark& benchmark,
                                                 std::span<const scoring::ScoreRecord> scores, Level level,
                                                 const SuiteOptions& options) {
  const ScoreTable table(scores);
  if (table.metrics().empty()) throw DataError("no scores to evaluate");
  switch (level) {
    case Level::segment: return segment_level(benchmark, table, options);
    case Level::system: return system_level(benchmark, table, options);
    case Level::sample: return sample_level(benchmark, table, options);
    case Level::preference: return preference_level(benchmark, table, options);
  }
  return {};
}

void write_reports(std::span<const CorrelationReport> reports, std::ostream& out) {
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["metric_id"] = r.metric_id;
    j["setting"] = r.setting;
    j["statistic"] = to_string(r.statistic);
    j["value"] = r.value;
    j["n_items"] = r.n_items;
    j["n_excluded"] = r.n_excluded;
    util::write_jsonl_line(out, j);
  }
}

std::vector<CorrelationReport> read_reports(std::istream& in, const std::string& origin) {
  std::vector<CorrelationReport> out;
  util::read_jsonl(in, origin, [&](std::size_t, const util::Json& obj) {
    out.push_back({util::require_string(obj, "metric_id"), util::require_string(obj, "setting"),
                   parse_statistic(util::require_string(obj, "statistic")), util::require_number(obj, "value"),
                   static_cast<std::size_t>(util::require_integer(obj, "n_items")),
                   static_cast<std::size_t>(util::require_integer(obj, "n_excluded"))});
  });
  return out;
}

std::string format_report_table(std::span<const CorrelationReport> reports) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %-12s %-20s %9s %8s %8s\n", "metric", "setting", "statistic", "value",
                "items", "excluded");
  out += line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-12s %-12s %-20s %9.4f %8zu %8zu\n", r.metric_id.c_str(), r.setting.c_str(),
                  std::string(to_string(r.statistic)).c_str(), r.value, r.n_items, r.n_excluded);
    out += line;
  }
  return out;
}

}  // namespace divref::metaeval
