#include <doctest.h>

#include <random>

#include "divref/metrics/bleu.hpp"
#include "divref/metrics/chrf.hpp"
#include "divref/metrics/cider.hpp"
#include "divref/metrics/meteor.hpp"
#include "divref/metrics/rouge.hpp"
#include "oracles/metric_oracles.hpp"

using namespace divref::metrics;

namespace {

constexpr double kTol = 1e-9;

struct Gen {
  std::mt19937_64 rng;
  std::vector<std::string> alphabet;

  oracle::Tokens tokens(int min_len = 0) {
    std::uniform_int_distribution<int> len(min_len, 12);
    std::uniform_int_distribution<std::size_t> sym(0, alphabet.size() - 1);
    oracle::Tokens out(static_cast<std::size_t>(len(rng)));
    for (auto& t : out) t = alphabet[sym(rng)];
    return out;
  }
};

std::string join(const oracle::Tokens& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? " " : "") + t[i];
  return s;
}

std::u32string wide(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("BLEU, ChrF and ROUGE match the direct definitions") {
  Gen g{std::mt19937_64(101), {"a", "b", "c", "d", "e"}};
  for (int trial = 0; trial < 100; ++trial) {
    const auto h = g.tokens();
    std::vector<oracle::Tokens> refs;
    const int nrefs = 1 + trial % 3;
    for (int i = 0; i < nrefs; ++i) refs.push_back(g.tokens(1));
    std::vector<std::string> ref_text;
    for (const auto& r : refs) ref_text.push_back(join(r));
    CAPTURE(join(h));
    CAPTURE(ref_text[0]);
    CHECK(std::abs(sentence_bleu(join(h), ref_text).value - oracle::bleu(h, refs)) <= kTol);
    const auto per_ref = chrf_per_reference(join(h), ref_text);
    for (std::size_t i = 0; i < refs.size(); ++i) {
      CHECK(std::abs(per_ref[i] - oracle::chrf(wide(join(h)), wide(ref_text[i]))) <= kTol);
      CHECK(std::abs(rouge_n_tokens(h, refs[i], 1) - oracle::rouge_n(h, refs[i], 1)) <= kTol);
      CHECK(std::abs(rouge_n_tokens(h, refs[i], 2) - oracle::rouge_n(h, refs[i], 2)) <= kTol);
      CHECK(std::abs(rouge_l_tokens(h, refs[i]) - oracle::rouge_l(h, refs[i])) <= kTol);
    }
  }
}

TEST_CASE("METEOR matches exhaustive alignment search") {
  // Stems are hard-coded so the oracle does not depend on the stemmer.
  Gen g{std::mt19937_64(202), {"cat", "cats", "run", "running", "dog"}};
  auto stem = [](const std::string& w) -> std::string {
    if (w == "cats") return "cat";
    if (w == "running") return "run";
    return w;
  };
  for (int trial = 0; trial < 100; ++trial) {
    const auto h = g.tokens();
    const auto r = g.tokens(1);
    auto match = [&](int i, int j) {
      if (h[i] == r[j]) return 2;
      return stem(h[i]) == stem(r[j]) ? 1 : 0;
    };
    const auto expect = oracle::best_alignment(static_cast<int>(h.size()), static_cast<int>(r.size()), match);
    const auto got = meteor_align(h, r);
    CAPTURE(join(h));
    CAPTURE(join(r));
    REQUIRE(got.exhaustive);
    CHECK(got.exact_matches == static_cast<std::size_t>(expect.exact));
    CHECK(got.matches == static_cast<std::size_t>(expect.matches));
    CHECK(got.chunks == static_cast<std::size_t>(expect.chunks));
    const std::vector<std::string> refs{join(r)};
    const double want = oracle::meteor_score(expect, static_cast<int>(h.size()), static_cast<int>(r.size()));
    CHECK(std::abs(meteor(join(h), refs).value - want) <= kTol);
  }
}

TEST_CASE("CIDEr-D matches brute-force tf-idf") {
  Gen g{std::mt19937_64(303), {"a", "b", "c", "d", "e"}};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<CiderInstance> corpus;
    std::vector<std::vector<oracle::Tokens>> docs;
    std::vector<oracle::Tokens> hyps;
    const int n = 2 + trial % 4;
    for (int i = 0; i < n; ++i) {
      hyps.push_back(g.tokens());
      std::vector<oracle::Tokens> refs{g.tokens(1), g.tokens(1)};
      docs.push_back(refs);
      corpus.push_back({join(hyps.back()), {join(refs[0]), join(refs[1])}});
    }
    const auto scores = cider(corpus);
    for (int i = 0; i < n; ++i) {
      double sum = 0.0;
      for (const auto& ref : docs[static_cast<std::size_t>(i)]) sum += oracle::cider_single(hyps[static_cast<std::size_t>(i)], ref, docs);
      CHECK(std::abs(scores[static_cast<std::size_t>(i)].value - sum / 2.0) <= kTol);
    }
  }
}

TEST_CASE("every metric stays in its range on random text pairs") {
  Gen g{std::mt19937_64(404), {"the", "cat", "cats", "sat", "on", "mat", ",", "."}};
  std::vector<CiderInstance> corpus;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto h = join(g.tokens());
    const std::vector<std::string> refs{join(g.tokens(1))};
    const double b = sentence_bleu(h, refs).value;
    const double c = chrf(h, refs).value;
    const double r1 = rouge_n(h, refs, 1).value;
    const double r2 = rouge_n(h, refs, 2).value;
    const double rl = rouge_l(h, refs).value;
    const double m = meteor(h, refs).value;
    CHECK((b >= 0.0 && b <= 1.0));
    CHECK((c >= 0.0 && c <= 100.0));
    CHECK((r1 >= 0.0 && r1 <= 1.0));
    CHECK((r2 >= 0.0 && r2 <= 1.0));
    CHECK((rl >= 0.0 && rl <= 1.0));
    CHECK((m >= 0.0 && m <= 1.0));
    corpus.push_back({h, refs});
  }
  for (const auto& s : cider(corpus)) CHECK((s.value >= 0.0 && s.value <= 10.0 + 1e-12));
}
