#include "divref/cli/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>

#include "divref/corpus/io.hpp"
#include "divref/diversifier/diversifier.hpp"
#include "divref/diversity/diversity.hpp"
#include "divref/error.hpp"
#include "divref/external/external.hpp"
#include "divref/metaeval/suite.hpp"
#include "divref/pipeline/pipeline.hpp"
#include "divref/scoring/scoring.hpp"
#include "divref/text/unicode.hpp"
#include "divref/util/jsonl.hpp"

namespace divref::cli {

namespace fs = std::filesystem;

std::vector<int> parse_int_list(const std::string& spec) {
  std::vector<int> out;
  std::istringstream in(spec);
  std::string item;
  auto to_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("not an integer list: '" + spec + "'");
  };
  while (std::getline(in, item, ',')) {
    const std::string t(text::trim(item));
    if (t.empty()) continue;
    const auto dots = t.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(t));
      continue;
    }
    const int lo = to_int(t.substr(0, dots)), hi = to_int(t.substr(dots + 2));
    if (hi < lo) throw UsageError("empty range '" + t + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty integer list");
  return out;
}

namespace {

struct Globals {
  std::string config;
  bool offline = false;
  std::size_t jobs = 0;
  std::string provider;
};

// Settings shared by subcommands: the config file when given, then flags.
struct Context {
  Globals globals;
  std::optional<pipeline::RunConfig> config;

  void load() {
    if (!globals.config.empty()) config = pipeline::load_run_config(globals.config);
  }
  bool offline() const { return globals.offline || (config && config->offline); }
  std::size_t jobs() const { return globals.jobs ? globals.jobs : (config ? config->jobs : 1); }

  fs::path benchmark(const std::string& flag) const {
    if (!flag.empty()) return flag;
    if (config) return config->benchmark;
    throw UsageError("--benchmark is required (or give --config)");
  }
  corpus::Format format(const std::string& flag) const {
    if (!flag.empty()) return corpus::parse_format(flag);
    return config ? config->format : corpus::Format::native;
  }
  std::optional<fs::path> provider_path() const {
    if (!globals.provider.empty()) return fs::path(globals.provider);
    if (config && config->provider_config) return config->provider_config;
    return std::nullopt;
  }
  diversifier::ProviderConfig provider_config() const {
    const auto p = provider_path();
    return p ? diversifier::load_provider_config(*p) : diversifier::ProviderConfig{};
  }
  // Network-backed only when a provider config exists and the run is online.
  std::shared_ptr<diversifier::CompletionProvider> completion() const {
    if (offline() || !provider_path()) return diversifier::make_offline_completion_provider();
    return diversifier::make_http_completion_provider(provider_config());
  }
  std::shared_ptr<diversifier::EmbeddingProvider> embedder() const {
    if (offline() || !provider_path()) return diversifier::make_offline_embedding_provider();
    return diversifier::make_http_embedding_provider(provider_config());
  }
  diversifier::GenerateOptions generate_options() const {
    diversifier::GenerateOptions o;
    const auto pc = provider_config();
    o.max_concurrency = pc.max_concurrency;
    o.retry.max_attempts = pc.max_attempts;
    return o;
  }
};

corpus::Benchmark load_with_refs(const Context& ctx, const std::string& benchmark, const std::string& format,
                                 const std::string& refs) {
  auto b = corpus::load_benchmark(ctx.benchmark(benchmark), ctx.format(format));
  if (!refs.empty()) b = corpus::merge_diversified(b, corpus::load_records(refs));
  return b;
}

std::string text_of(const std::function<void(std::ostream&)>& write) {
  std::ostringstream s;
  write(s);
  return s.str();
}

void add_benchmark_options(CLI::App* cmd, std::string& benchmark, std::string& format) {
  cmd->add_option("--benchmark", benchmark, "Benchmark file");
  cmd->add_option("--format", format, "wmt | summeval | pascal50s | native");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"divref: multi-reference evaluation with diversified references"};
  app.require_subcommand(1);
  Context ctx;
  app.add_option("--config", ctx.globals.config, "Run configuration file");
  app.add_flag("--offline", ctx.globals.offline, "Forbid network access; caches must cover every request");
  app.add_option("--jobs", ctx.globals.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--provider", ctx.globals.provider, "Provider config file");

  std::function<void()> action;

  // ingest
  std::string ing_benchmark, ing_format, ing_out;
  auto* ingest = app.add_subcommand("ingest", "Validate a benchmark and convert it to the native format");
  add_benchmark_options(ingest, ing_benchmark, ing_format);
  ingest->add_option("--out", ing_out, "Native output file");
  ingest->callback([&] {
    action = [&] {
      const auto b = corpus::load_benchmark(ctx.benchmark(ing_benchmark), ctx.format(ing_format));
      if (!ing_out.empty()) corpus::save_native(b, ing_out);
      out << b.name << ": " << b.segments.size() << " segments, " << b.system_outputs.size() << " outputs, "
          << b.human_judgments.size() << " judgments\n";
    };
  });

  // diversify
  std::string div_benchmark, div_format, div_prompts, div_out, div_cache;
  int div_n = -1;
  bool div_dedupe = false;
  auto* diversify = app.add_subcommand("diversify", "Generate diversified references");
  add_benchmark_options(diversify, div_benchmark, div_format);
  diversify->add_option("--prompts", div_prompts, "diverse | basic | multilingual");
  diversify->add_option("--n", div_n, "Generations per segment");
  diversify->add_option("--out", div_out, "Generations file")->required();
  diversify->add_option("--cache", div_cache, "Generation cache");
  diversify->add_flag("--dedupe", div_dedupe, "Drop exact duplicate texts per segment");
  diversify->callback([&] {
    action = [&] {
      const auto b = corpus::load_benchmark(ctx.benchmark(div_benchmark), ctx.format(div_format));
      const auto set = !div_prompts.empty() ? diversifier::parse_prompt_set(div_prompts)
                                            : (ctx.config ? ctx.config->prompt_set : diversifier::PromptSet::diverse);
      const int n = div_n >= 0 ? div_n : (ctx.config ? ctx.config->n_references : 10);
      const fs::path cache_path = !div_cache.empty() ? fs::path(div_cache)
                                  : ctx.config           ? ctx.config->cache_path()
                                                         : fs::path(div_out).replace_extension(".cache.jsonl");
      diversifier::GenerationCache cache(cache_path);
      auto provider = ctx.completion();
      auto records = diversifier::generate_diversified(b, set, n, ctx.provider_config().generation_params(),
                                                       *provider, cache, ctx.generate_options());
      if (div_dedupe) records = diversifier::dedupe(records);
      corpus::save_records(records, div_out);
      out << records.size() << " generations written to " << div_out << "\n";
    };
  });

  // filter
  std::string fil_refs, fil_out, fil_benchmark, fil_format, fil_answers;
  auto* filter = app.add_subcommand("filter", "Flag generations the judge considers not meaning-preserving");
  filter->add_option("--refs", fil_refs, "Generations file")->required();
  filter->add_option("--out", fil_out, "Filtered generations file")->required();
  add_benchmark_options(filter, fil_benchmark, fil_format);
  filter->add_option("--answers", fil_answers, "Judge answer cache");
  filter->callback([&] {
    action = [&] {
      const auto b = corpus::load_benchmark(ctx.benchmark(fil_benchmark), ctx.format(fil_format));
      const auto records = corpus::load_records(fil_refs);
      diversifier::AnswerCache answers(fil_answers.empty() ? fs::path(fil_out).replace_extension(".judge.jsonl")
                                                           : fs::path(fil_answers));
      auto judge = ctx.completion();
      const auto result = diversifier::filter_subpar(records, b.reference_sets, *judge,
                                                     ctx.provider_config().judge_params(), ctx.generate_options(),
                                                     &answers);
      corpus::save_records(result.records, fil_out);
      for (const auto& w : result.warnings) err << "warning: " << w << "\n";
      out << "kept " << result.kept << ", flagged " << result.flagged << " (" << result.unparseable
          << " unparseable answers kept)\n";
    };
  });

  // score
  std::string sc_metric, sc_agg = "max", sc_benchmark, sc_format, sc_refs, sc_out;
  int sc_n = -1;
  bool sc_include_filtered = false;
  auto* score = app.add_subcommand("score", "Score system outputs against the reference sets");
  score->add_option("--metric", sc_metric, "Metric id(s), comma-separated")->required();
  score->add_option("--agg", sc_agg, "single | max | mean | builtin");
  add_benchmark_options(score, sc_benchmark, sc_format);
  score->add_option("--refs", sc_refs, "Generations file to merge");
  score->add_option("--n", sc_n, "Use the first n diversified references");
  score->add_flag("--include-filtered", sc_include_filtered, "Keep judge-flagged references");
  score->add_option("--out", sc_out, "Score dump")->required();
  score->callback([&] {
    action = [&] {
      const auto b = load_with_refs(ctx, sc_benchmark, sc_format, sc_refs);
      std::vector<scoring::ScoreRecord> all;
      for (auto id : pipeline::parse_metric_list(sc_metric)) {
        scoring::ScoringOptions o;
        o.metric.metric_id = id;
        o.aggregation = metrics::parse_aggregation(sc_agg);
        o.include_filtered = sc_include_filtered;
        if (sc_n >= 0) o.max_diversified = static_cast<std::size_t>(sc_n);
        o.jobs = ctx.jobs();
        auto part = scoring::score_benchmark(b, o);
        all.insert(all.end(), part.begin(), part.end());
      }
      scoring::save_score_dump(all, sc_out);
      out << all.size() << " scores written to " << sc_out << "\n";
    };
  });

  // scores-import
  std::string imp_in, imp_agg = "max", imp_out, imp_benchmark, imp_format, imp_refs;
  bool imp_include_filtered = false;
  auto* import = app.add_subcommand("scores-import", "Aggregate per-reference scores computed elsewhere");
  import->add_option("--in", imp_in, "External score file")->required();
  import->add_option("--agg", imp_agg, "max | mean");
  import->add_option("--out", imp_out, "Score dump")->required();
  add_benchmark_options(import, imp_benchmark, imp_format);
  import->add_option("--refs", imp_refs, "Generations file (for reference index validation)");
  import->add_flag("--include-filtered", imp_include_filtered, "Count judge-flagged references");
  import->callback([&] {
    action = [&] {
      std::optional<corpus::Benchmark> b;
      if (!imp_benchmark.empty() || ctx.config) b = load_with_refs(ctx, imp_benchmark, imp_format, imp_refs);
      const auto records = external::load_external_scores(imp_in, b ? &*b : nullptr, imp_include_filtered);
      const auto dump = external::aggregate_external(records, metrics::parse_aggregation(imp_agg));
      scoring::save_score_dump(dump, imp_out);
      out << records.size() << " external scores aggregated into " << dump.size() << " records\n";
    };
  });

  // diversity
  std::string dv_refs, dv_embeddings, dv_out, dv_benchmark, dv_format, dv_model;
  bool dv_ground_truth = false, dv_include_filtered = false;
  auto* diversity = app.add_subcommand("diversity", "Mean pairwise cosine distance of the rephrasings");
  diversity->add_option("--refs", dv_refs, "Generations file")->required();
  diversity->add_option("--embeddings", dv_embeddings, "Embedding cache (precomputed vectors)");
  diversity->add_option("--out", dv_out, "Report file")->required();
  add_benchmark_options(diversity, dv_benchmark, dv_format);
  diversity->add_option("--model", dv_model, "Embedding model id");
  diversity->add_flag("--include-ground-truth", dv_ground_truth, "Include y* in the pairs");
  diversity->add_flag("--include-filtered", dv_include_filtered, "Include judge-flagged generations");
  diversity->callback([&] {
    action = [&] {
      const auto records = corpus::load_records(dv_refs);
      std::unordered_map<std::string, std::string> gts;
      if (dv_ground_truth) {
        const auto b = corpus::load_benchmark(ctx.benchmark(dv_benchmark), ctx.format(dv_format));
        for (const auto& r : b.reference_sets) gts.emplace(r.segment_id, r.ground_truth);
      }
      const std::string model = !dv_model.empty() ? dv_model : ctx.provider_config().embedding_model;
      const fs::path cache_path =
          !dv_embeddings.empty() ? fs::path(dv_embeddings) : fs::path(dv_out).replace_extension(".embeddings.jsonl");
      diversity::EmbeddingCache cache(cache_path, dv_embeddings.empty() || !ctx.offline());
      auto provider = ctx.embedder();
      diversity::DiversityOptions o;
      o.include_ground_truth = dv_ground_truth;
      o.include_filtered = dv_include_filtered;
      const auto report = diversity::diversity_report(records, gts, model, *provider, cache, o);
      std::string text;
      for (const auto& inst : report.instances) {
        nlohmann::ordered_json j;
        j["segment_id"] = inst.segment_id;
        j["n_texts"] = inst.n_texts;
        j["diversity"] = inst.value;
        text += j.dump() + "\n";
      }
      nlohmann::ordered_json summary;
      summary["corpus_diversity"] = report.corpus_value;
      summary["instances"] = report.instances.size();
      summary["skipped"] = report.skipped;
      text += summary.dump() + "\n";
      util::write_file(dv_out, text);
      out << "corpus diversity " << report.corpus_value << " over " << report.instances.size() << " instances";
      if (!report.skipped.empty()) out << " (" << report.skipped.size() << " skipped)";
      out << "\n";
    };
  });

  // metaeval
  std::string me_benchmark, me_format, me_level, me_out;
  std::vector<std::string> me_scores;
  bool me_per_system = false;
  auto* metaeval = app.add_subcommand("metaeval", "Correlate metric scores with human judgments");
  add_benchmark_options(metaeval, me_benchmark, me_format);
  metaeval->add_option("--scores", me_scores, "Score dump(s)")->required();
  metaeval->add_option("--level", me_level, "segment | system | sample | preference")->required();
  metaeval->add_option("--out", me_out, "Report file")->required();
  metaeval->add_flag("--per-system-tau", me_per_system, "Segment tau per system, then averaged");
  metaeval->callback([&] {
    action = [&] {
      const auto b = corpus::load_benchmark(ctx.benchmark(me_benchmark), ctx.format(me_format));
      std::vector<fs::path> paths(me_scores.begin(), me_scores.end());
      const auto scores = scoring::load_score_dumps(paths);
      metaeval::SuiteOptions o;
      o.per_system_segment_tau = me_per_system || (ctx.config && ctx.config->per_system_segment_tau);
      o.jobs = ctx.jobs();
      const auto reports = metaeval::correlation_suite(b, scores, metaeval::parse_level(me_level), o);
      util::write_file(me_out, text_of([&](std::ostream& s) { metaeval::write_reports(reports, s); }));
      out << metaeval::format_report_table(reports);
    };
  });

  // sweep
  std::string sw_n = "0..10", sw_out;
  auto* sweep = app.add_subcommand("sweep", "Statistics as a function of the number of references");
  sweep->add_option("--n", sw_n, "n values, e.g. 0..10 or 0,1,5");
  sweep->add_option("--out", sw_out, "Sweep file");
  sweep->callback([&] {
    action = [&] {
      if (!ctx.config) throw UsageError("sweep needs --config");
      auto config = *ctx.config;
      config.offline = ctx.offline();
      config.jobs = ctx.jobs();
      if (!ctx.globals.provider.empty()) config.provider_config = ctx.globals.provider;
      const auto n_values = parse_int_list(sw_n);
      const auto rows = pipeline::sweep_reference_count(config, n_values);
      const fs::path path = sw_out.empty() ? config.output_dir / "sweep.jsonl" : fs::path(sw_out);
      util::write_file(path, text_of([&](std::ostream& s) { pipeline::write_sweep(rows, s); }));
      out << pipeline::format_sweep_table(rows);
    };
  });

  // report
  std::string rp_single, rp_divref;
  auto* report = app.add_subcommand("report", "Run the whole pipeline, or compare two report files");
  report->add_option("--single", rp_single, "Single-Ref report file");
  report->add_option("--divref", rp_divref, "Div-Ref report file");
  report->callback([&] {
    action = [&] {
      if (!rp_single.empty() || !rp_divref.empty()) {
        if (rp_single.empty() || rp_divref.empty()) throw UsageError("--single and --divref go together");
        std::ifstream a(rp_single), d(rp_divref);
        if (!a || !d) throw DataError("cannot open report files");
        out << pipeline::format_comparison_table(metaeval::read_reports(a, rp_single),
                                                 metaeval::read_reports(d, rp_divref));
        return;
      }
      if (!ctx.config) throw UsageError("report needs --config (or --single and --divref)");
      auto config = *ctx.config;
      config.offline = ctx.offline();
      config.jobs = ctx.jobs();
      if (!ctx.globals.provider.empty()) config.provider_config = ctx.globals.provider;
      const auto dir = pipeline::run_pipeline(config);
      out << util::read_file(dir / "report.txt");
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::usage);
  }

  try {
    ctx.load();
    if (action) action();
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::usage);
  } catch (const ProviderError& e) {
    err << "provider error: " << e.what() << "\n";
    for (const auto& k : e.missing_keys()) err << "  missing: " << k << "\n";
    return static_cast<int>(ExitCode::provider);
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::data);
  } catch (const std::exception& e) {
    err << "data error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::data);
  }
}

}  // namespace divref::cli
