#include <doctest.h>

#include <algorithm>
#include <random>

#include "divref/aggregation/aggregation.hpp"
#include "divref/error.hpp"
#include "divref/metrics/bleu.hpp"
#include "divref/metrics/scorer.hpp"
#include "divref/metrics/tokenizer.hpp"

using namespace divref;
using namespace divref::aggregation;
using metrics::MetricConfig;
using metrics::MetricId;

namespace {

std::unique_ptr<metrics::Scorer> scorer(MetricId id) {
  MetricConfig c;
  c.metric_id = id;
  return metrics::make_scorer(c);
}

std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> words{"the", "cat", "sat", "on", "a", "mat", "dog", "ran"};
  std::uniform_int_distribution<int> len(1, 10);
  std::uniform_int_distribution<std::size_t> w(0, words.size() - 1);
  std::string s;
  for (int i = len(rng); i > 0; --i) s += words[w(rng)] + (i > 1 ? " " : "");
  return s;
}

}  // namespace

TEST_CASE("aggregate examples") {
  const std::vector<double> a{0.2, 0.5, 0.3};
  CHECK(aggregate(a, Aggregation::max) == 0.5);
  const std::vector<double> b{0.2, 0.4};
  CHECK(aggregate(b, Aggregation::mean) == doctest::Approx(0.3));
  const std::vector<double> one{0.7};
  for (auto s : {Aggregation::max, Aggregation::mean, Aggregation::single, Aggregation::builtin}) {
    CHECK(aggregate(one, s) == 0.7);
  }
  CHECK_THROWS_AS(aggregate({}, Aggregation::max), std::invalid_argument);
}

TEST_CASE("builtin strategy needs native multi-reference support") {
  CHECK_NOTHROW(check_strategy(MetricId::bleu, Aggregation::builtin));
  CHECK_NOTHROW(check_strategy(MetricId::chrf, Aggregation::builtin));
  for (auto id : {MetricId::rouge1, MetricId::rouge2, MetricId::rougeL, MetricId::meteor, MetricId::cider}) {
    CHECK_THROWS_AS(check_strategy(id, Aggregation::builtin), UsageError);
  }
}

TEST_CASE("fixture sentence with the four-reference set") {
  const auto s = scorer(MetricId::bleu);
  corpus::ReferenceSet refs;
  refs.segment_id = "x";
  refs.ground_truth = "The apple is my most loved fruit but the banana is her most loved.";
  for (const char* r : {"Apples rank as my favorite fruit, but bananas hold that title for her.",
                        "Apple is my favorite fruit, but banana is her most beloved.",
                        "My most loved fruit is the apple, while her most loved is the banana."}) {
    refs.diversified.push_back({r, corpus::LlmProvenance{"p1", 0, "m"}, std::nullopt});
  }
  const std::string hyp = "My favorite fruit is apple, while hers beloved is banana.";
  const auto builtin = score_with_refset(*s, hyp, refs, Aggregation::builtin);
  CHECK(builtin.value == doctest::Approx(0.2511832450998465).epsilon(1e-12));
  CHECK(builtin.aggregation_used == Aggregation::builtin);
  const auto max = score_with_refset(*s, hyp, refs, Aggregation::max);
  CHECK(max.value == doctest::Approx(0.156712876772722).epsilon(1e-12));
  CHECK(max.per_reference.size() == 4);
  const auto single = score_with_refset(*s, hyp, refs, Aggregation::single);
  CHECK(single.value == doctest::Approx(0.04289945608476924).epsilon(1e-12));
}

TEST_CASE("ground-truth-only set equals the single-reference score") {
  const auto s = scorer(MetricId::chrf);
  corpus::ReferenceSet refs{"x", "a small test", {}};
  const std::vector<std::string> one{"a small test"};
  for (auto a : {Aggregation::max, Aggregation::mean, Aggregation::single, Aggregation::builtin}) {
    CHECK(score_with_refset(*s, "a test", refs, a).value == s->per_reference("a test", one)[0]);
  }
}

TEST_CASE("max equals the best independent single-reference call") {
  std::mt19937_64 rng(9);
  for (auto id : metrics::all_metrics()) {
    if (id == MetricId::cider) continue;
    const auto s = scorer(id);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::string> refs;
      for (int i = 0; i < 5; ++i) refs.push_back(random_text(rng));
      const auto hyp = random_text(rng);
      double best = 0.0;
      for (const auto& r : refs) {
        const std::vector<std::string> one{r};
        best = std::max(best, s->per_reference(hyp, one)[0]);
      }
      CHECK(score_with_references(*s, hyp, refs, Aggregation::max).value == best);
    }
  }
}

TEST_CASE("max monotone, mean bounded, permutation invariant") {
  std::mt19937_64 rng(10);
  const auto s = scorer(MetricId::rouge1);
  for (int trial = 0; trial < 300; ++trial) {
    const auto hyp = random_text(rng);
    std::vector<std::string> refs{random_text(rng), random_text(rng)};
    const double before = score_with_references(*s, hyp, refs, Aggregation::max).value;
    refs.push_back(random_text(rng));
    const auto after = score_with_references(*s, hyp, refs, Aggregation::max);
    CHECK(after.value >= before);
    const auto mean = score_with_references(*s, hyp, refs, Aggregation::mean);
    const auto [lo, hi] = std::minmax_element(mean.per_reference.begin(), mean.per_reference.end());
    CHECK(mean.value >= *lo);
    CHECK(mean.value <= *hi);
    auto shuffled = mean.per_reference;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(aggregate(shuffled, Aggregation::max) == aggregate(mean.per_reference, Aggregation::max));
    CHECK(aggregate(shuffled, Aggregation::mean) == doctest::Approx(aggregate(mean.per_reference, Aggregation::mean)).epsilon(1e-15));
  }
}

TEST_CASE("built-in BLEU clipped counts grow with references") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto hyp = metrics::tokenize(random_text(rng));
    std::vector<std::vector<std::string>> refs{metrics::tokenize(random_text(rng))};
    auto prev = metrics::bleu_statistics(hyp, refs);
    for (int k = 0; k < 4; ++k) {
      refs.push_back(metrics::tokenize(random_text(rng)));
      const auto next = metrics::bleu_statistics(hyp, refs);
      for (std::size_t n = 0; n < next.matches.size(); ++n) CHECK(next.matches[n] >= prev.matches[n]);
      prev = next;
    }
  }
}

TEST_CASE("filtered entries are excluded unless requested") {
  const auto s = scorer(MetricId::rouge1);
  corpus::ReferenceSet refs{"x", "zzz", {{"a b", corpus::LlmProvenance{"p1", 0, "m"}, true}}};
  CHECK(score_with_refset(*s, "a b", refs, Aggregation::max).value == 0.0);
  CHECK(score_with_refset(*s, "a b", refs, Aggregation::max, true).value == 1.0);
}
