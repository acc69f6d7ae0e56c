#include <doctest.h>

#include "divref/error.hpp"
#include "divref/metrics/cider.hpp"
#include "oracles/metric_oracles.hpp"

using namespace divref;
using namespace divref::metrics;

namespace {

oracle::Tokens split(const std::string& s) {
  oracle::Tokens out;
  std::string cur;
  for (char c : s) {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("two disjoint instances with hypothesis equal to reference") {
  const std::vector<CiderInstance> corpus{{"a b c", {"a b c"}}, {"x y z w", {"x y z w"}}};
  const auto scores = cider(corpus);
  REQUIRE(scores.size() == 2);
  const std::vector<std::vector<oracle::Tokens>> docs{{split("a b c")}, {split("x y z w")}};
  CHECK(scores[0].value == doctest::Approx(oracle::cider_single(split("a b c"), split("a b c"), docs)).epsilon(1e-9));
  CHECK(scores[1].value == doctest::Approx(oracle::cider_single(split("x y z w"), split("x y z w"), docs)).epsilon(1e-9));
  // Identity in a corpus where every n-gram has df=1 and only orders <= length
  // contribute: orders 1..3 give cosine 1 for the first instance.
  CHECK(scores[0].value == doctest::Approx(10.0 * 3.0 / 4.0).epsilon(1e-12));
  CHECK(scores[1].value == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("no shared n-gram scores 0") {
  const std::vector<CiderInstance> corpus{{"q r", {"a b c"}}, {"x y", {"x y"}}};
  CHECK(cider(corpus)[0].value == 0.0);
}

TEST_CASE("doubling the idf corpus leaves scores unchanged") {
  const std::vector<std::vector<std::string>> docs{{"a b c d", "a b d"}, {"b c d e"}, {"c d e a", "e e a"}};
  std::vector<std::vector<std::string>> doubled = docs;
  doubled.insert(doubled.end(), docs.begin(), docs.end());
  CiderIdf once(docs);
  CiderIdf twice(doubled);
  CHECK(twice.document_count() == 2 * once.document_count());
  for (const char* hyp : {"a b c d", "b d e", "e a", "c d e"}) {
    for (const auto& doc : docs) {
      for (const auto& ref : doc) CHECK(twice.score(hyp, ref) == doctest::Approx(once.score(hyp, ref)).epsilon(1e-12));
    }
  }
}

TEST_CASE("document frequency counts documents, not occurrences") {
  const std::vector<std::vector<std::string>> docs{{"a a b", "a"}, {"b"}};
  CiderIdf idf(docs);
  CHECK(idf.document_frequency("a") == 1.0);
  CHECK(idf.document_frequency("b") == 2.0);
  CHECK(idf.document_frequency("a a") == 1.0);
  CHECK(idf.document_frequency("zzz") == 0.0);
}

TEST_CASE("stemming and punctuation removal") {
  const auto c = cider_counts("The cats, running!");
  CHECK(c.length == 3);
  CHECK(c.by_order[0].count("cat") == 1);
  CHECK(c.by_order[0].count("run") == 1);
  CHECK(c.by_order[0].count(",") == 0);
}

TEST_CASE("corpus requirements") {
  const std::vector<CiderInstance> one{{"a", {"a"}}};
  CHECK_THROWS_AS(cider(one), UsageError);
  const std::vector<CiderInstance> with_empty{{"", {"a b"}}, {"c", {"c"}}};
  CHECK(cider(with_empty)[0].value == 0.0);
}

TEST_CASE("per-reference scores are averaged") {
  const std::vector<CiderInstance> corpus{{"a b c", {"a b c", "x y"}}, {"d e", {"d e"}}};
  const auto s = cider(corpus);
  REQUIRE(s[0].per_reference.size() == 2);
  CHECK(s[0].value == doctest::Approx((s[0].per_reference[0] + s[0].per_reference[1]) / 2));
  CHECK(s[0].aggregation_used == Aggregation::mean);
}
