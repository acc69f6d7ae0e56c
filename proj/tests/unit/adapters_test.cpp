#include <doctest.h>

#include <sstream>

#include "divref/corpus/io.hpp"
#include "divref/error.hpp"

using namespace divref;
using namespace divref::corpus;

namespace {

Benchmark load(const std::string& text, Format f) {
  std::istringstream in(text);
  return load_benchmark(in, f, "mem.jsonl");
}

}  // namespace

TEST_CASE("wmt flat export") {
  const std::string text = R"({"lp":"zh-en","seg_id":1,"source":"s","reference":"r one","system":"A","hypothesis":"h","mqm":-1.5,"domain":"news"}
{"lp":"zh-en","seg_id":1,"source":"s","reference":"r one","system":"B","hypothesis":"h2","mqm":0}
{"lp":"zh-en","seg_id":2,"source":"t","reference":"r two","system":"A","hypothesis":"h3","extra_references":["r two b"]}
{"lp":"zh-en","system":"A","system_score":80.5}
)";
  const auto b = load(text, Format::wmt);
  CHECK(b.task == Task::translation);
  REQUIRE(b.segments.size() == 2);
  CHECK(b.segments[0].id == "zh-en:1");
  CHECK(b.segments[0].domain_tag == "news");
  CHECK(b.system_outputs.size() == 3);
  CHECK(b.reference_sets[1].diversified.size() == 1);
  CHECK(std::holds_alternative<HumanProvenance>(b.reference_sets[1].diversified[0].provenance));
  REQUIRE(b.human_judgments.size() == 3);
  CHECK(b.human_judgments[2].kind == JudgmentKind::system_score);
  CHECK(b.human_judgments[2].language_pair == "zh-en");
}

TEST_CASE("wmt rows must agree on shared segments") {
  const std::string text = R"({"lp":"zh-en","seg_id":1,"source":"s","reference":"r","system":"A","hypothesis":"h"}
{"lp":"zh-en","seg_id":1,"source":"s","reference":"different","system":"B","hypothesis":"h"}
)";
  CHECK_THROWS_AS(load(text, Format::wmt), DataError);
}

TEST_CASE("summeval aspect means and extra references") {
  const std::string text = R"({"id":"d1","text":"article","references":["gt","second"],"model_id":"M1","decoded":"sum","expert_annotations":[{"coherence":2,"consistency":5,"fluency":4,"relevance":3},{"coherence":4,"consistency":5,"fluency":5,"relevance":2}]}
{"id":"d1","text":"article","references":["gt","second"],"model_id":"M2","decoded":"sum2","expert_annotations":[{"coherence":1,"consistency":1,"fluency":1,"relevance":1}]}
)";
  const auto b = load(text, Format::summeval);
  CHECK(b.task == Task::summarization);
  CHECK(b.segments.size() == 1);
  CHECK(b.reference_sets[0].ground_truth == "gt");
  CHECK(b.reference_sets[0].diversified.size() == 1);
  REQUIRE(b.human_judgments.size() == 8);
  CHECK(b.human_judgments[0].aspect == Aspect::coherence);
  CHECK(*b.human_judgments[0].value == doctest::Approx(3.0));
  CHECK(*b.human_judgments[3].value == doctest::Approx(2.5));
}

TEST_CASE("pascal50s preference records") {
  const std::string text = R"({"id":"i1","candidates":["a dog runs","a cat sits"],"references":["a dog is running","dog running"],"preferred":0,"category":"HC"}
{"id":"i2","candidates":["x","y"],"references":["y"],"preferred":1,"category":"MM"}
)";
  const auto b = load(text, Format::pascal50s);
  CHECK(b.task == Task::caption);
  CHECK(b.system_outputs.size() == 4);
  REQUIRE(b.human_judgments.size() == 2);
  CHECK(b.human_judgments[0].candidates == std::vector<std::string>{"cand0", "cand1"});
  CHECK(b.human_judgments[1].setting == PreferenceSetting::MM);
  CHECK(b.segments[0].source_text.empty());
}

TEST_CASE("pascal50s record with one candidate") {
  const std::string text = R"({"id":"i1","candidates":["only"],"references":["r"],"preferred":0,"category":"HC"})" "\n";
  try {
    load(text, Format::pascal50s);
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("preference requires two candidates") != std::string::npos);
  }
}

TEST_CASE("unknown format name") {
  CHECK(parse_format("wmt") == Format::wmt);
  CHECK_THROWS_AS(parse_format("csv"), UsageError);
}
