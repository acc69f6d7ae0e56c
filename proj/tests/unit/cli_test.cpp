#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "divref/cli/cli.hpp"
#include "divref/corpus/io.hpp"
#include "divref/error.hpp"
#include "divref/scoring/score_dump.hpp"
#include "divref/util/digest.hpp"
#include "divref/util/jsonl.hpp"

using namespace divref;
namespace fs = std::filesystem;

namespace {

const fs::path kTiny = fs::path(DIVREF_SOURCE_DIR) / "data" / "fixtures" / "tiny";

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("divref_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string s(const fs::path& p) { return p.string(); }

}  // namespace

TEST_CASE("integer lists") {
  CHECK(cli::parse_int_list("0..3") == std::vector<int>{0, 1, 2, 3});
  CHECK(cli::parse_int_list("0,2, 5") == std::vector<int>{0, 2, 5});
  CHECK(cli::parse_int_list("1..2,10") == std::vector<int>{1, 2, 10});
  CHECK_THROWS_AS(cli::parse_int_list("3..1"), UsageError);
  CHECK_THROWS_AS(cli::parse_int_list("x"), UsageError);
  CHECK_THROWS_AS(cli::parse_int_list(""), UsageError);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"score", "--benchmark", "x"}).code == 1);  // --metric and --out missing
  CHECK(run({"--help"}).code == 0);
  const auto dir = temp_dir("codes");
  const auto missing = run({"ingest", "--benchmark", s(dir / "nope.jsonl")});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("data error") != std::string::npos);
  const auto bad_metric = run({"score", "--benchmark", s(kTiny / "benchmark.jsonl"), "--metric", "bleurt", "--out",
                               s(dir / "x.jsonl")});
  CHECK(bad_metric.code == 1);
  const auto offline = run({"--offline", "diversify", "--benchmark", s(kTiny / "benchmark.jsonl"), "--n", "2", "--out",
                            s(dir / "g.jsonl"), "--cache", s(dir / "cold.jsonl")});
  CHECK(offline.code == 3);
  CHECK(offline.err.find("missing: t1") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("ingest, diversify from cache, score, metaeval, report") {
  const auto dir = temp_dir("flow");
  const auto bench = s(kTiny / "benchmark.jsonl");
  const auto ingest = run({"ingest", "--benchmark", bench, "--out", s(dir / "native.jsonl")});
  REQUIRE(ingest.code == 0);
  CHECK(ingest.out.find("5 segments, 15 outputs, 15 judgments") != std::string::npos);
  CHECK(util::read_file(dir / "native.jsonl") == util::read_file(kTiny / "benchmark.jsonl"));

  const auto gen = run({"--offline", "--provider", s(kTiny / "provider.conf"), "diversify", "--benchmark", bench,
                        "--prompts", "diverse", "--n", "3", "--out", s(dir / "gen.jsonl"), "--cache",
                        s(kTiny / "cache.jsonl")});
  REQUIRE(gen.code == 0);
  CHECK(corpus::load_records(dir / "gen.jsonl").size() == 15);

  const auto single = run({"score", "--metric", "bleu,chrf", "--agg", "single", "--benchmark", bench, "--out",
                           s(dir / "single.jsonl")});
  REQUIRE(single.code == 0);
  const auto divref = run({"--jobs", "2", "score", "--metric", "bleu,chrf", "--agg", "max", "--benchmark", bench,
                           "--refs", s(dir / "gen.jsonl"), "--out", s(dir / "divref.jsonl")});
  REQUIRE(divref.code == 0);
  const auto dump = scoring::load_score_dump(dir / "divref.jsonl");
  REQUIRE(dump.size() == 30);
  CHECK(dump[0].per_reference.size() == 4);
  CHECK(dump[0].value == doctest::Approx(0.156712876772722).epsilon(1e-12));

  const auto me1 = run({"metaeval", "--benchmark", bench, "--scores", s(dir / "single.jsonl"), "--level", "segment",
                        "--out", s(dir / "r_single.jsonl")});
  const auto me2 = run({"metaeval", "--benchmark", bench, "--scores", s(dir / "divref.jsonl"), "--level", "segment",
                        "--out", s(dir / "r_divref.jsonl")});
  REQUIRE(me1.code == 0);
  REQUIRE(me2.code == 0);
  CHECK(me2.out.find("kendall_tau_b") != std::string::npos);
  const auto table = run({"report", "--single", s(dir / "r_single.jsonl"), "--divref", s(dir / "r_divref.jsonl")});
  REQUIRE(table.code == 0);
  CHECK(table.out.find("0.3143     0.6952") != std::string::npos);

  const auto bad_level = run({"metaeval", "--benchmark", bench, "--scores", s(dir / "divref.jsonl"), "--level",
                              "sample", "--out", s(dir / "r.jsonl")});
  CHECK(bad_level.code == 2);
  fs::remove_all(dir);
}

TEST_CASE("report and sweep from a config") {
  const auto dir = temp_dir("config");
  std::string conf = util::read_file(kTiny / "run.conf");
  conf += "output_dir=" + s(dir / "out") + "\n";
  conf.replace(conf.find("benchmark=benchmark.jsonl"), 25, "benchmark=" + s(kTiny / "benchmark.jsonl"));
  conf.replace(conf.find("provider_config=provider.conf"), 29, "provider_config=" + s(kTiny / "provider.conf"));
  conf.replace(conf.find("cache=cache.jsonl"), 17, "cache=" + s(kTiny / "cache.jsonl"));
  // The later output_dir wins over the fixture's.
  util::write_file(dir / "run.conf", conf);
  const auto report = run({"--config", s(dir / "run.conf"), "report"});
  REQUIRE(report.code == 0);
  CHECK(report.out.find("Single-Ref") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "manifest.json"));
  const auto sweep = run({"--config", s(dir / "run.conf"), "sweep", "--n", "0..3", "--out", s(dir / "sweep.jsonl")});
  REQUIRE(sweep.code == 0);
  std::size_t lines = 0;
  util::read_jsonl(dir / "sweep.jsonl", [&](std::size_t, const util::Json&) { ++lines; });
  // 4 n values x 4 metrics x (mean score, tau, pairwise accuracy)
  CHECK(lines == 48);
  const auto too_many = run({"--config", s(dir / "run.conf"), "sweep", "--n", "0..4"});
  CHECK(too_many.code == 3);
  fs::remove_all(dir);
}

TEST_CASE("scores-import and diversity") {
  const auto dir = temp_dir("import");
  util::write_file(dir / "ext.jsonl",
                   R"({"metric_id":"comet","system_id":"sysA","segment_id":"t1","reference_index":0,"value":0.5}
{"metric_id":"comet","system_id":"sysA","segment_id":"t1","reference_index":1,"value":0.75}
)");
  const auto imp = run({"scores-import", "--in", s(dir / "ext.jsonl"), "--agg", "max", "--out", s(dir / "d.jsonl")});
  REQUIRE(imp.code == 0);
  CHECK(scoring::load_score_dump(dir / "d.jsonl")[0].value == 0.75);
  // Index 1 is out of range without the generations.
  const auto strict = run({"scores-import", "--in", s(dir / "ext.jsonl"), "--out", s(dir / "d2.jsonl"), "--benchmark",
                           s(kTiny / "benchmark.jsonl")});
  CHECK(strict.code == 2);
  CHECK(run({"scores-import", "--in", s(dir / "ext.jsonl"), "--agg", "builtin", "--out", s(dir / "d3.jsonl")}).code ==
        1);

  // Precomputed embeddings for two generations of t1.
  corpus::DiversifiedRecord a{"t1", "p1", 0, "m", "one text", "", "d", std::nullopt};
  corpus::DiversifiedRecord b{"t1", "p2", 0, "m", "another text", "", "d", std::nullopt};
  const std::vector<corpus::DiversifiedRecord> recs = {a, b};
  corpus::save_records(recs, dir / "gen.jsonl");
  std::string emb;
  for (const auto& [text, values] : {std::pair{a.text, "[1,0]"}, std::pair{b.text, "[0,1]"}}) {
    emb += R"({"text_digest":")" + util::sha256_hex(text) + R"(","model_id":"e","values":)" + values + "}\n";
  }
  util::write_file(dir / "emb.jsonl", emb);
  const auto div = run({"--offline", "diversity", "--refs", s(dir / "gen.jsonl"), "--embeddings", s(dir / "emb.jsonl"),
                        "--model", "e", "--out", s(dir / "div.jsonl")});
  REQUIRE(div.code == 0);
  CHECK(div.out.find("corpus diversity 1 over 1 instances") != std::string::npos);
  const auto no_vectors = run({"--offline", "diversity", "--refs", s(dir / "gen.jsonl"), "--embeddings",
                               s(dir / "emb.jsonl"), "--model", "other", "--out", s(dir / "div2.jsonl")});
  CHECK(no_vectors.code == 3);
  fs::remove_all(dir);
}
