#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "divref/error.hpp"
#include "divref/metaeval/statistics.hpp"
#include "divref/metaeval/suite.hpp"

using namespace divref;
using namespace divref::metaeval;
using corpus::HumanJudgment;
using corpus::JudgmentKind;

namespace {

// O(n^2) tau-b straight from the definition.
double naive_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  double c = 0, d = 0, tx = 0, ty = 0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0) ++tx;
      if (dy == 0) ++ty;
      if (dx != 0 && dy != 0) (dx * dy > 0 ? c : d) += 1;
    }
  }
  const double p = static_cast<double>(n * (n - 1) / 2);
  return (c - d) / std::sqrt((p - tx) * (p - ty));
}

std::vector<double> naive_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double w : v) {
      if (w < v[i]) ++less;
      if (w == v[i]) ++equal;
    }
    r[i] = less + (equal + 1) / 2.0;
  }
  return r;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

bool all_same(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
}

// 5 segments, systems A/B/C, one language pair.
const std::map<std::string, std::vector<double>> kHuman = {
    {"A", {0.9, 0.7, 0.8, 0.6, 0.5}}, {"B", {0.6, 0.7, 0.4, 0.6, 0.3}}, {"C", {0.2, 0.1, 0.5, 0.3, 0.3}}};
const std::map<std::string, std::vector<double>> kMetric1 = {
    {"A", {0.8, 0.6, 0.7, 0.5, 0.6}}, {"B", {0.5, 0.6, 0.5, 0.4, 0.2}}, {"C", {0.3, 0.2, 0.4, 0.3, 0.1}}};
const std::map<std::string, std::vector<double>> kMetric2 = {
    {"A", {0.1, 0.2, 0.3, 0.4, 0.5}}, {"B", {0.5, 0.4, 0.3, 0.2, 0.1}}, {"C", {0.3, 0.3, 0.3, 0.3, 0.3}}};

corpus::Benchmark fixture() {
  corpus::Benchmark b;
  b.name = "five";
  for (int s = 0; s < 5; ++s) {
    const std::string id = "s" + std::to_string(s + 1);
    b.segments.push_back({id, "src", {"de", "en"}, std::nullopt});
    b.reference_sets.push_back({id, "ref", {}});
  }
  for (const auto& [sys, values] : kHuman) {
    for (int s = 0; s < 5; ++s) {
      const std::string id = "s" + std::to_string(s + 1);
      b.system_outputs.push_back({sys, id, "hyp"});
      HumanJudgment j;
      j.kind = JudgmentKind::segment_score;
      j.segment_id = id;
      j.system_id = sys;
      j.value = values[s];
      b.human_judgments.push_back(j);
    }
  }
  return b;
}

std::vector<scoring::ScoreRecord> dump(const std::string& metric, const std::map<std::string, std::vector<double>>& v) {
  std::vector<scoring::ScoreRecord> out;
  for (const auto& [sys, values] : v) {
    for (int s = 0; s < 5; ++s) out.push_back({metric, sys, "s" + std::to_string(s + 1), values[s], {values[s]}, "max"});
  }
  return out;
}

std::map<std::string, std::vector<double>> transform(const std::map<std::string, std::vector<double>>& v, double a,
                                                     double c) {
  auto out = v;
  for (auto& [k, xs] : out) {
    for (auto& x : xs) x = a * x + c;
  }
  return out;
}

}  // namespace

TEST_CASE("kendall_tau_b examples") {
  const std::vector<double> a = {1, 2, 3}, b = {3, 2, 1};
  CHECK(kendall_tau_b(a, a) == doctest::Approx(1.0));
  CHECK(kendall_tau_b(a, b) == doctest::Approx(-1.0));
  const std::vector<double> x = {1, 2, 3, 4}, y = {1, 3, 2, 4};
  CHECK(kendall_tau_b(x, y) == doctest::Approx(4.0 / 6.0));
  const std::vector<double> shorter = {1, 2};
  CHECK_THROWS_AS(kendall_tau_b(x, shorter), DataError);
  const std::vector<double> ties = {2, 2, 2, 2};
  CHECK_THROWS_AS(kendall_tau_b(x, ties), DataError);
  const std::vector<double> one = {1};
  CHECK_THROWS_AS(kendall_tau_b(one, one), DataError);
}

TEST_CASE("spearman examples") {
  const std::vector<double> a = {1, 2, 3, 4}, b = {4, 3, 2, 1};
  CHECK(spearman(a, a) == doctest::Approx(1.0));
  CHECK(spearman(a, b) == doctest::Approx(-1.0));
  // Mid-ranks [1, 2.5, 2.5, 4] vs [1, 3, 2, 4]: 4.5 / sqrt(4.5 * 5).
  const std::vector<double> x = {1, 2, 2, 4}, y = {1, 3, 2, 4};
  CHECK(spearman(x, y) == doctest::Approx(0.9486832980505138).epsilon(1e-12));
  CHECK(mid_ranks(x) == std::vector<double>{1, 2.5, 2.5, 4});
}

TEST_CASE("tau-b and Spearman match definition oracles with ties") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 49;
    std::uniform_int_distribution<int> small(0, 1 + static_cast<int>(rng() % 6));
    std::vector<double> x(n), y(n);
    for (auto& e : x) e = small(rng);
    for (auto& e : y) e = small(rng);
    if (all_same(x) || all_same(y)) {
      CHECK_THROWS_AS(kendall_tau_b(x, y), DataError);
      continue;
    }
    const double tau = kendall_tau_b(x, y);
    CHECK(std::abs(tau - naive_tau_b(x, y)) <= 1e-12);
    CHECK(std::abs(spearman(x, y) - pearson(naive_ranks(x), naive_ranks(y))) <= 1e-12);
    CHECK(tau >= -1.0);
    CHECK(tau <= 1.0);
  }
}

TEST_CASE("monotone-transform invariance and antisymmetry") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng() % 30;
    std::vector<double> x(n), y(n), fx(n), neg_y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = g(rng);
      y[i] = g(rng);
      fx[i] = std::exp(x[i]) * 3.0 + 1.0;
      neg_y[i] = -y[i];
    }
    CHECK(kendall_tau_b(fx, y) == doctest::Approx(kendall_tau_b(x, y)).epsilon(1e-12));
    CHECK(spearman(fx, y) == doctest::Approx(spearman(x, y)).epsilon(1e-12));
    CHECK(kendall_tau_b(x, neg_y) == doctest::Approx(-kendall_tau_b(x, y)).epsilon(1e-12));
    const double rho = spearman(x, y);
    CHECK(rho >= -1.0 - 1e-12);
    CHECK(rho <= 1.0 + 1e-12);
  }
}

TEST_CASE("pairwise_system_accuracy") {
  const std::map<std::string, double> human = {{"A", 3}, {"B", 2}, {"C", 1}};
  CHECK(pairwise_system_accuracy(human, human).value == doctest::Approx(1.0));
  const std::map<std::string, double> metric = {{"A", 3}, {"B", 1}, {"C", 2}};
  const auto r = pairwise_system_accuracy(metric, human);
  CHECK(r.value == doctest::Approx(2.0 / 3.0));
  CHECK(r.n_items == 3);

  const std::map<std::string, double> flat = {{"A", 1}, {"B", 1}, {"C", 1}};
  try {
    pairwise_system_accuracy(metric, flat);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("zero evaluable pairs") != std::string::npos);
  }
  const std::map<std::string, double> partial_ties = {{"A", 2}, {"B", 2}, {"C", 1}};
  const auto p = pairwise_system_accuracy(metric, partial_ties);
  CHECK(p.n_items == 2);
  CHECK(p.n_excluded == 1);
  // Metric ties are incorrect.
  CHECK(pairwise_system_accuracy(flat, human).value == 0.0);
  const std::map<std::string, double> other = {{"A", 1}, {"D", 2}, {"C", 3}};
  CHECK_THROWS_AS(pairwise_system_accuracy(other, human), DataError);
  const std::map<std::string, double> lonely = {{"A", 1}};
  CHECK_THROWS_AS(pairwise_system_accuracy(lonely, lonely), DataError);
}

TEST_CASE("preference_accuracy") {
  const std::vector<PreferenceInstance> good = {{0.9, 0.1, 0}, {0.2, 0.3, 1}};
  CHECK(preference_accuracy(good).value == 1.0);
  const std::vector<PreferenceInstance> ties = {{0.5, 0.5, 0}, {0.1, 0.1, 1}};
  CHECK(preference_accuracy(ties).value == 0.0);
  const std::vector<PreferenceInstance> four = {{1, 0, 0}, {0, 1, 1}, {2, 1, 0}, {1, 2, 0}};
  CHECK(preference_accuracy(four).value == doctest::Approx(0.75));
  CHECK(preference_accuracy(four).n_items == 4);
  CHECK_THROWS_AS(preference_accuracy(std::vector<PreferenceInstance>{}), DataError);
}

TEST_CASE("suite: copy of human is perfect, negation is reversed") {
  const auto b = fixture();
  const auto copy = dump("copy", kHuman);
  const auto segment = correlation_suite(b, copy, Level::segment);
  REQUIRE(segment.size() == 1);
  CHECK(segment[0].setting == "de-en");
  CHECK(segment[0].value == doctest::Approx(1.0));
  CHECK(segment[0].n_items == 15);
  const auto system = correlation_suite(b, copy, Level::system);
  REQUIRE(system.size() == 1);
  CHECK(system[0].value == 1.0);

  const auto negated = dump("neg", transform(kHuman, -1.0, 0.0));
  CHECK(correlation_suite(b, negated, Level::segment)[0].value == doctest::Approx(-1.0));
  CHECK(correlation_suite(b, negated, Level::system)[0].value == 0.0);
}

TEST_CASE("suite: two-metric fixture matches the hand-built report") {
  const auto b = fixture();
  auto scores = dump("m1", kMetric1);
  const auto m2 = dump("m2", kMetric2);
  scores.insert(scores.end(), m2.begin(), m2.end());

  const auto segment = correlation_suite(b, scores, Level::segment);
  REQUIRE(segment.size() == 2);
  CHECK(segment[0].metric_id == "m1");
  CHECK(segment[0].value == doctest::Approx(0.7668496718679524).epsilon(1e-12));
  CHECK(segment[1].metric_id == "m2");
  CHECK(segment[1].value == doctest::Approx(-0.03405574568898749).epsilon(1e-12));

  const auto system = correlation_suite(b, scores, Level::system);
  REQUIRE(system.size() == 2);
  CHECK(system[0].value == 1.0);
  CHECK(system[0].n_items == 3);
  // m2 ties every system at 0.3.
  CHECK(system[1].value == 0.0);

  SuiteOptions per_system;
  per_system.per_system_segment_tau = true;
  const auto averaged = correlation_suite(b, scores, Level::segment, per_system);
  CHECK(averaged[0].value == doctest::Approx(0.6163252994945776).epsilon(1e-12));
  CHECK(averaged[0].n_excluded == 0);
  CHECK(averaged[1].value == doctest::Approx(-0.13647686165263506).epsilon(1e-12));
  CHECK(averaged[1].n_excluded == 1);

  // Monotone transforms of the metric leave every report unchanged.
  auto shifted = dump("m1", transform(kMetric1, 2.0, 5.0));
  const auto moved = correlation_suite(b, shifted, Level::segment);
  CHECK(moved[0].value == doctest::Approx(segment[0].value).epsilon(1e-12));

  // Thread count does not change the result.
  SuiteOptions threads;
  threads.jobs = 4;
  CHECK(correlation_suite(b, scores, Level::segment, threads) == segment);
}

TEST_CASE("suite: coverage gaps are enumerated") {
  const auto b = fixture();
  auto scores = dump("m1", kMetric1);
  scores.erase(scores.begin());
  try {
    correlation_suite(b, scores, Level::segment);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("m1 / A / s1") != std::string::npos);
  }
  CHECK_THROWS_AS(correlation_suite(b, scores, Level::sample), DataError);
}

TEST_CASE("suite: sample and preference levels") {
  corpus::Benchmark b;
  b.task = corpus::Task::summarization;
  for (const char* id : {"d1", "d2"}) {
    b.segments.push_back({id, "doc", {}, std::nullopt});
    b.reference_sets.push_back({id, "summary", {}});
  }
  const std::map<std::string, std::vector<double>> human = {{"A", {3, 1}}, {"B", {2, 1}}, {"C", {1, 1}}};
  const std::map<std::string, std::vector<double>> metric = {{"A", {0.3, 0.1}}, {"B", {0.1, 0.2}}, {"C", {0.2, 0.3}}};
  std::vector<scoring::ScoreRecord> scores;
  for (const auto& [sys, hv] : human) {
    for (int d = 0; d < 2; ++d) {
      const std::string doc = "d" + std::to_string(d + 1);
      b.system_outputs.push_back({sys, doc, "x"});
      HumanJudgment j;
      j.kind = JudgmentKind::aspect_score;
      j.aspect = corpus::Aspect::coherence;
      j.segment_id = doc;
      j.system_id = sys;
      j.value = hv[d];
      b.human_judgments.push_back(j);
      scores.push_back({"m", sys, doc, metric.at(sys)[d], {}, "max"});
    }
  }
  const auto sample = correlation_suite(b, scores, Level::sample);
  REQUIRE(sample.size() == 1);
  CHECK(sample[0].setting == "coherence");
  CHECK(sample[0].statistic == Statistic::spearman);
  // d1: ranks [3,1,2] vs [3,2,1] -> 0.5; d2 is all-tied for humans.
  CHECK(sample[0].value == doctest::Approx(0.5));
  CHECK(sample[0].n_items == 1);
  CHECK(sample[0].n_excluded == 1);

  HumanJudgment pref;
  pref.kind = JudgmentKind::pairwise_preference;
  pref.segment_id = "d1";
  pref.candidates = {"A", "B"};
  pref.preferred_index = 0;
  pref.setting = corpus::PreferenceSetting::HC;
  b.human_judgments.push_back(pref);
  pref.candidates = {"B", "C"};
  pref.setting = corpus::PreferenceSetting::MM;
  b.human_judgments.push_back(pref);
  const auto preference = correlation_suite(b, scores, Level::preference);
  REQUIRE(preference.size() == 2);
  CHECK(preference[0].setting == "HC");
  CHECK(preference[0].value == 1.0);
  CHECK(preference[1].setting == "MM");
  CHECK(preference[1].value == 0.0);
}

TEST_CASE("report round trip") {
  const std::vector<CorrelationReport> reports = {{"bleu", "de-en", Statistic::kendall_tau_b, 0.1234567890123, 10, 0},
                                                  {"chrf", "all", Statistic::pairwise_accuracy, 0.5, 4, 2}};
  std::stringstream s;
  write_reports(reports, s);
  CHECK(read_reports(s, "mem") == reports);
  const auto table = format_report_table(reports);
  CHECK(table.find("kendall_tau_b") != std::string::npos);
  CHECK_THROWS_AS(parse_level("corpus"), UsageError);
}
