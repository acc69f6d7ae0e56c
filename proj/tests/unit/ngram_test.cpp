#include <doctest.h>

#include <random>

#include "divref/metrics/ngram.hpp"

using namespace divref::metrics;

TEST_CASE("profile totals follow the sequence length") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint32_t> seq(rng() % 15);
    for (auto& s : seq) s = rng() % 4;
    NGramIndexer indexer(5);
    const auto indexed = indexer.index(seq);
    for (int k = 1; k <= 5; ++k) {
      const auto p = make_profile(indexed, k, indexer.distinct(k));
      const std::uint64_t expect = seq.size() >= static_cast<std::size_t>(k) ? seq.size() - k + 1 : 0;
      CHECK(p.total == expect);
      std::uint64_t sum = 0;
      for (auto c : p.counts) sum += c;
      CHECK(sum == expect);
    }
  }
}

TEST_CASE("ids are shared across sequences of one indexer") {
  NGramIndexer indexer(2);
  const std::vector<std::uint32_t> a{1, 2, 1, 2};
  const std::vector<std::uint32_t> b{2, 1, 2};
  const auto ia = indexer.index(a);
  const auto ib = indexer.index(b);
  CHECK(indexer.distinct(1) == 2);
  CHECK(indexer.distinct(2) == 2);
  const auto pa = make_profile(ia, 2, indexer.distinct(2));
  const auto pb = make_profile(ib, 2, indexer.distinct(2));
  // a: (1,2)x2 (2,1)x1; b: (2,1)x1 (1,2)x1
  CHECK(clipped_matches(pa, pb) == 2);
  const std::vector<NGramProfile> refs{pa, pb};
  const auto m = max_profile(refs);
  CHECK(m.counts == pa.counts);
}

TEST_CASE("vocabulary interns stably") {
  Vocabulary v;
  CHECK(v.id("x") == 0);
  CHECK(v.id("y") == 1);
  CHECK(v.id("x") == 0);
  const std::vector<std::string> toks{"y", "z"};
  CHECK(v.ids(toks) == std::vector<std::uint32_t>{1, 2});
}
