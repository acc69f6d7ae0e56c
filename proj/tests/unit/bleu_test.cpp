#include <doctest.h>

#include "divref/error.hpp"
#include "divref/metrics/bleu.hpp"
#include "divref/metrics/tokenizer.hpp"
#include "oracles/metric_oracles.hpp"

using namespace divref;
using namespace divref::metrics;
using Refs = std::vector<std::string>;

namespace {

const std::string kHyp = "My favorite fruit is apple, while hers beloved is banana.";
const Refs kRefs = {
    "The apple is my most loved fruit but the banana is her most loved.",
    "Apples rank as my favorite fruit, but bananas hold that title for her.",
    "Apple is my favorite fruit, but banana is her most beloved.",
    "My most loved fruit is the apple, while her most loved is the banana.",
};

}  // namespace

TEST_CASE("identical hypothesis and reference score 1") {
  const Refs r{"the cat sat"};
  CHECK(sentence_bleu("the cat sat", r).value == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("clipping of repeated unigrams") {
  const Refs r{"the cat"};
  const auto s = sentence_bleu("the the the the", r);
  // Unigram 1/4, then zero-match orders smoothed to 1/(2*3), 1/(4*2), 1/(8*1).
  CHECK(s.value == doctest::Approx(0.1597357760615681).epsilon(1e-12));
  CHECK(s.value == doctest::Approx(oracle::bleu({"the", "the", "the", "the"}, {{"the", "cat"}})).epsilon(1e-12));
  const auto stats = bleu_statistics(tokenize("the the the the"), std::vector<std::vector<std::string>>{tokenize("the cat")});
  CHECK(stats.matches[0] == 1);
  CHECK(stats.totals[0] == 4);
}

TEST_CASE("fixture sentence against each reference") {
  const auto per_ref = sentence_bleu_per_reference(kHyp, kRefs);
  const std::vector<double> expect{0.04289945608476924, 0.11154876603882442, 0.156712876772722, 0.14136737337188593};
  REQUIRE(per_ref.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(per_ref[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    const Refs one{kRefs[i]};
    CHECK(per_ref[i] == doctest::Approx(sentence_bleu(kHyp, one).value).epsilon(1e-15));
  }
}

TEST_CASE("fixture sentence with all references at once") {
  const auto s = sentence_bleu(kHyp, kRefs);
  CHECK(s.aggregation_used == Aggregation::builtin);
  CHECK(s.value == doctest::Approx(0.2511832450998465).epsilon(1e-12));
  std::vector<std::vector<std::string>> ref_tokens;
  for (const auto& r : kRefs) ref_tokens.push_back(tokenize(r));
  CHECK(s.value == doctest::Approx(oracle::bleu(tokenize(kHyp), ref_tokens)).epsilon(1e-12));
}

TEST_CASE("brevity penalty uses the closest reference length, shorter on ties") {
  // hyp length 3; references of length 2 and 4 are equally close.
  const Refs r{"a b", "a b c x"};
  const auto stats = bleu_statistics(tokenize("a b c"), std::vector<std::vector<std::string>>{tokenize(r[0]), tokenize(r[1])});
  CHECK(stats.ref_len == 2);
  CHECK(sentence_bleu("a b c", r).value == doctest::Approx(1.0));
}

TEST_CASE("empty hypothesis scores 0 and empty reference list throws") {
  const Refs r{"a b c"};
  CHECK(sentence_bleu("", r).value == 0.0);
  CHECK_THROWS_AS(sentence_bleu("a", Refs{}), UsageError);
}

TEST_CASE("effective order for short hypotheses") {
  const Refs r{"hello"};
  CHECK(sentence_bleu("hello", r).value == doctest::Approx(1.0));
}
