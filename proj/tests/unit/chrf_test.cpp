#include <doctest.h>

#include "divref/error.hpp"
#include "divref/metrics/chrf.hpp"
#include "oracles/metric_oracles.hpp"

using namespace divref;
using namespace divref::metrics;
using Refs = std::vector<std::string>;

TEST_CASE("identity scores 100") {
  const Refs r{"a quick brown fox"};
  CHECK(chrf("a quick brown fox", r).value == doctest::Approx(100.0));
}

TEST_CASE("abc against abd") {
  const Refs r{"abd"};
  const double v = chrf("abc", r).value;
  // P = R = (2/3 + 1/2) / 2 over the two effective orders.
  CHECK(v == doctest::Approx(38.888888888888886).epsilon(1e-12));
  CHECK(v == doctest::Approx(oracle::chrf(U"abc", U"abd")).epsilon(1e-12));
}

TEST_CASE("empty hypothesis scores 0") {
  const Refs r{"anything"};
  CHECK(chrf("", r).value == 0.0);
  CHECK(chrf("   ", r).value == 0.0);
}

TEST_CASE("whitespace is ignored") {
  const Refs r{"ab cd"};
  CHECK(chrf("abcd", r).value == doctest::Approx(100.0));
}

TEST_CASE("multi-reference value is the best single-reference score") {
  const std::string hyp = "My favorite fruit is apple, while hers beloved is banana.";
  const Refs refs = {
      "The apple is my most loved fruit but the banana is her most loved.",
      "Apples rank as my favorite fruit, but bananas hold that title for her.",
      "Apple is my favorite fruit, but banana is her most beloved.",
      "My most loved fruit is the apple, while her most loved is the banana.",
  };
  const auto per_ref = chrf_per_reference(hyp, refs);
  const std::vector<double> expect{29.501903973177253, 37.47367018841706, 50.41935814939576, 50.55118344947641};
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(per_ref[i] == doctest::Approx(expect[i]).epsilon(1e-12));
  CHECK(chrf(hyp, refs).value == doctest::Approx(50.55118344947641).epsilon(1e-12));
}

TEST_CASE("case is preserved unless configured") {
  const Refs r{"ABC"};
  CHECK(chrf("abc", r).value == 0.0);
  ChrfParams p;
  p.lowercase = true;
  CHECK(chrf("abc", r, p).value == doctest::Approx(100.0));
}

TEST_CASE("empty reference list throws") {
  CHECK_THROWS_AS(chrf("a", Refs{}), UsageError);
}
