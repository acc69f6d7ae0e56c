#include <doctest.h>

#include <cmath>

#include "divref/error.hpp"
#include "divref/metrics/meteor.hpp"
#include "divref/metrics/tokenizer.hpp"

using namespace divref;
using namespace divref::metrics;
using Refs = std::vector<std::string>;

TEST_CASE("single word identity") {
  const Refs r{"cat"};
  CHECK(meteor("cat", r).value == doctest::Approx(0.5));
}

TEST_CASE("five word identity") {
  const Refs r{"the cat sat on mat"};
  CHECK(meteor("the cat sat on mat", r).value == doctest::Approx(1.0 - 0.5 * std::pow(0.2, 3)).epsilon(1e-12));
  CHECK(meteor("the cat sat on mat", r).value == doctest::Approx(0.996).epsilon(1e-12));
}

TEST_CASE("identity gives F_mean 1 and penalty gamma / m^beta") {
  for (int m = 1; m <= 9; ++m) {
    std::string s;
    for (int i = 0; i < m; ++i) s += (i ? " w" : "w") + std::to_string(i);
    const Refs r{s};
    CHECK(meteor(s, r).value == doctest::Approx(1.0 - 0.5 * std::pow(1.0 / m, 3.0)).epsilon(1e-12));
  }
}

TEST_CASE("disjoint texts score 0") {
  const Refs r{"x y z"};
  CHECK(meteor("a b c", r).value == 0.0);
  CHECK(meteor("", r).value == 0.0);
}

TEST_CASE("stem matches count after exact ones") {
  const auto h = tokenize("the cats running");
  const auto r = tokenize("the cat runs");
  const auto a = meteor_align(h, r);
  CHECK(a.matches == 3);
  CHECK(a.exact_matches == 1);
  CHECK(a.chunks == 1);
  CHECK(a.exhaustive);
}

TEST_CASE("alignment prefers exact matches over fewer chunks") {
  // "cat" can stem-match "cats" in place or exactly match the later "cat".
  const auto h = tokenize("a cat");
  const auto r = tokenize("a cats x cat");
  const auto a = meteor_align(h, r);
  CHECK(a.exact_matches == 2);
  CHECK(a.matches == 2);
  CHECK(a.chunks == 2);
}

TEST_CASE("chunks count runs in order on both sides") {
  const auto h = tokenize("a b c d");
  const auto r = tokenize("c d a b");
  const auto a = meteor_align(h, r);
  CHECK(a.matches == 4);
  CHECK(a.chunks == 2);
  const double p = 1.0;
  const double fmean = p;
  CHECK(meteor_from_alignment(a, 4, 4) == doctest::Approx(fmean * (1 - 0.5 * std::pow(0.5, 3))));
}

TEST_CASE("multi-reference takes the best reference") {
  const Refs r{"x y", "a b"};
  const auto s = meteor("a b", r);
  CHECK(s.per_reference[0] == 0.0);
  CHECK(s.value == doctest::Approx(s.per_reference[1]));
  CHECK_THROWS_AS(meteor("a", Refs{}), UsageError);
}

TEST_CASE("tiny search budget still returns a valid alignment") {
  const auto h = tokenize("a b a b a b a b a b");
  const auto r = tokenize("b a b a b a b a b a");
  const auto full = meteor_align(h, r);
  const auto tiny = meteor_align(h, r, 4);
  CHECK(full.exhaustive);
  CHECK(tiny.matches <= full.matches);
  CHECK(tiny.chunks >= 1);
  CHECK(full.matches == 10);
  CHECK(full.chunks == 2);
}
