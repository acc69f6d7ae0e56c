#include <doctest.h>

#include <sstream>

#include "divref/aggregation/aggregation.hpp"
#include "divref/error.hpp"
#include "divref/external/external.hpp"

using namespace divref;
using namespace divref::external;
using metrics::Aggregation;

namespace {

// 2 segments with a ground truth and three diversified entries each; the
// last entry of g2 is filtered.
corpus::Benchmark bench() {
  corpus::Benchmark b;
  for (const char* id : {"g1", "g2"}) {
    b.segments.push_back({id, "src", {"de", "en"}, std::nullopt});
    corpus::ReferenceSet r{id, "gt", {}};
    for (int k = 0; k < 3; ++k) {
      r.diversified.push_back({"d" + std::to_string(k), corpus::LlmProvenance{"p" + std::to_string(k + 1), 0, "m"},
                               std::nullopt});
    }
    b.reference_sets.push_back(r);
  }
  b.reference_sets[1].diversified[2].filtered = true;
  for (const char* sys : {"A", "B", "C"}) {
    for (const char* seg : {"g1", "g2"}) b.system_outputs.push_back({sys, seg, "h"});
  }
  return b;
}

std::string line(const std::string& m, const std::string& sys, const std::string& seg, int idx, double v) {
  std::ostringstream s;
  s.precision(17);
  s << R"({"metric_id":")" << m << R"(","system_id":")" << sys << R"(","segment_id":")" << seg
    << R"(","reference_index":)" << idx << R"(,"value":)" << v << "}\n";
  return s.str();
}

std::vector<ExternalScoreRecord> parse(const std::string& text, const corpus::Benchmark* b = nullptr, bool incl = false) {
  std::istringstream in(text);
  return read_external_scores(in, "ext.jsonl", b, incl);
}

std::string error_of(const std::string& text, const corpus::Benchmark* b, bool incl = false) {
  try {
    parse(text, b, incl);
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("3 systems x 2 segments x 4 references load as 24 records") {
  const auto b = bench();
  std::string text;
  for (const char* sys : {"A", "B", "C"}) {
    for (const char* seg : {"g1", "g2"}) {
      for (int k = 0; k < 4; ++k) text += line("comet", sys, seg, k, 0.1 * k);
    }
  }
  CHECK(parse(text, &b, true).size() == 24);
  // Without filtered entries g2 has only indices 0..2.
  CHECK(error_of(text, &b).find("(comet, A, g2, 3): reference_index out of range") != std::string::npos);
}

TEST_CASE("validation errors") {
  const auto b = bench();
  CHECK(error_of(line("comet", "A", "g1", 5, 0.1), &b).find("(comet, A, g1, 5): reference_index out of range") !=
        std::string::npos);
  const auto dup = line("comet", "A", "g1", 1, 0.1) + line("comet", "A", "g1", 1, 0.2);
  const auto msg = error_of(dup, &b);
  CHECK(msg.find("duplicate") != std::string::npos);
  CHECK(msg.find("(comet, A, g1, 1)") != std::string::npos);
  CHECK(msg.find("ext.jsonl:2") != std::string::npos);
  CHECK(!error_of(line("comet", "Z", "g1", 0, 0.1), &b).empty());
  CHECK(!error_of(line("comet", "A", "g9", 0, 0.1), &b).empty());
  CHECK(!error_of("{\"metric_id\":\"comet\"}\n", nullptr).empty());
  CHECK(!error_of("not json\n", nullptr).empty());
  // Without a benchmark only the shape and duplicates are checked.
  CHECK(parse(line("comet", "Z", "g9", 7, 0.1)).size() == 1);
}

TEST_CASE("aggregation examples") {
  const auto recs = parse(line("m", "A", "g1", 0, 0.9) + line("m", "A", "g1", 1, 0.95) + line("m", "A", "g1", 2, 0.92));
  const auto max = aggregate_external(recs, Aggregation::max);
  REQUIRE(max.size() == 1);
  CHECK(max[0].value == 0.95);
  CHECK(max[0].per_reference == std::vector<double>{0.9, 0.95, 0.92});
  CHECK(max[0].aggregation == "max");

  const auto single = aggregate_external(parse(line("m", "A", "g1", 0, 0.42)), Aggregation::mean);
  CHECK(single[0].value == 0.42);

  // Out-of-order indices are sorted before aggregation.
  const auto shuffled = aggregate_external(parse(line("m", "A", "g1", 2, 0.3) + line("m", "A", "g1", 0, 0.1)),
                                           Aggregation::max);
  CHECK(shuffled[0].per_reference == std::vector<double>{0.1, 0.3});

  CHECK_THROWS_AS(aggregate_external(parse(line("m", "A", "g1", 1, 0.3)), Aggregation::max), DataError);
  CHECK_THROWS_AS(aggregate_external(recs, Aggregation::builtin), UsageError);
}

TEST_CASE("aggregation matches an independent recomputation") {
  struct Row {
    const char* metric;
    const char* system;
    const char* segment;
    std::vector<double> values;
    double max, mean;
  };
  // Values and expected aggregates computed separately.
  const std::vector<Row> rows = {
      {"comet", "A", "g1", {0.639427, 0.025011, 0.275029}, 0.639427, 0.31315566666666667},
      {"comet", "A", "g2", {0.223211, 0.736471, 0.676699}, 0.736471, 0.5454603333333333},
      {"comet", "B", "g1", {0.89218, 0.086939, 0.421922}, 0.89218, 0.46701366666666666},
      {"comet", "B", "g2", {0.029797, 0.218638, 0.505355}, 0.505355, 0.25126333333333334},
      {"bleurt", "A", "g1", {0.026536, 0.198838, 0.649884}, 0.649884, 0.29175266666666666},
      {"bleurt", "A", "g2", {0.544941, 0.220441, 0.589266}, 0.589266, 0.45154933333333336},
      {"bleurt", "B", "g1", {0.80943, 0.006499, 0.805819}, 0.80943, 0.5405826666666667},
      {"bleurt", "B", "g2", {0.698139, 0.340251, 0.155479}, 0.698139, 0.3979563333333333},
  };
  std::string text;
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.values.size(); ++k) text += line(r.metric, r.system, r.segment, static_cast<int>(k), r.values[k]);
  }
  const auto b = bench();
  const auto recs = parse(text, &b);
  const auto max = aggregate_external(recs, Aggregation::max);
  const auto mean = aggregate_external(recs, Aggregation::mean);
  REQUIRE(max.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(max[i].metric == rows[i].metric);
    CHECK(max[i].system == rows[i].system);
    CHECK(max[i].segment == rows[i].segment);
    CHECK(max[i].value == rows[i].max);
    CHECK(mean[i].value == doctest::Approx(rows[i].mean).epsilon(1e-15));
  }
}

TEST_CASE("external dumps are byte-identical to aggregation-module dumps") {
  const auto recs = parse(line("m", "A", "g1", 0, 0.1) + line("m", "A", "g1", 1, 0.7) + line("m", "A", "g1", 2, 0.3) +
                          line("m", "B", "g1", 0, 0.25) + line("m", "B", "g1", 1, 1.0 / 3.0));
  for (auto strategy : {Aggregation::max, Aggregation::mean}) {
    const auto external = aggregate_external(recs, strategy);
    std::vector<scoring::ScoreRecord> internal;
    for (const auto& e : external) {
      internal.push_back({e.metric, e.system, e.segment, aggregation::aggregate(e.per_reference, strategy),
                          e.per_reference, std::string(metrics::to_string(strategy))});
    }
    std::ostringstream a, c;
    scoring::write_score_dump(external, a);
    scoring::write_score_dump(internal, c);
    CHECK(a.str() == c.str());
  }
}
