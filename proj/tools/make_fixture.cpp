// Writes the bundled fixtures.
//
//   make_fixture synthetic --seed <k> --out <dir>
//   make_fixture tiny --out <dir>
//
// synthetic: sentences built from synonym slots. Each system output keeps a
// slot's meaning (any synonym) or replaces it with an unrelated word; the
// human score is the fraction of slots kept. Diversified references pick
// synonyms independently, so more references cover more of the legitimate
// variation. All randomness comes from --seed.
//
// tiny: five hand-written segments, one of them the fruit example, with three
// cached generations each.

#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "divref/corpus/io.hpp"
#include "divref/diversifier/diversifier.hpp"
#include "divref/util/jsonl.hpp"

using namespace divref;
namespace fs = std::filesystem;

namespace {

const char* kCreatedAt = "2024-01-01T00:00:00Z";
const char* kProvider =
    "# Model id of the cached generations; no network access is needed.\n"
    "model_id=synthetic-paraphraser\n"
    "temperature=1.0\n"
    "top_p=0.9\n";

const std::vector<std::vector<std::string>> kGroups = {
    {"big", "large", "huge", "vast"},          {"car", "vehicle", "automobile"},
    {"quickly", "rapidly", "swiftly", "fast"}, {"moved", "travelled", "went"},
    {"city", "town", "metropolis"},            {"old", "aged", "ancient", "elderly"},
    {"house", "home", "dwelling"},             {"small", "little", "tiny"},
    {"child", "kid", "youngster"},             {"happy", "glad", "cheerful", "joyful"},
    {"said", "stated", "remarked"},            {"begin", "start", "commence"},
    {"road", "street", "avenue"},              {"buy", "purchase", "acquire"},
    {"shop", "store", "market"},               {"quiet", "silent", "calm"},
    {"doctor", "physician", "medic"},          {"help", "assist", "aid", "support"},
    {"angry", "furious", "irate"},             {"answer", "reply", "response"},
    {"film", "movie", "picture"},              {"smart", "clever", "bright", "intelligent"},
    {"job", "work", "occupation"},             {"rich", "wealthy", "affluent"},
    {"hard", "difficult", "tough"},            {"end", "finish", "conclude"},
    {"picked", "chose", "selected"},           {"forest", "woods", "woodland"},
    {"river", "stream", "creek"},              {"near", "close", "nearby"},
    {"gift", "present", "offering"},           {"story", "tale", "narrative"},
    {"sick", "ill", "unwell"},                 {"wide", "broad", "extensive"},
    {"dinner", "supper", "meal"},              {"fix", "repair", "mend"},
};
const std::vector<std::string> kFillers = {"the", "a", "of", "and", "to", "in", "with", "for"};

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

struct Slot {
  std::size_t group;
  std::string filler;
};

std::string realize(const std::vector<Slot>& slots, const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
    if (i + 1 < slots.size()) out += ' ' + slots[i].filler;
  }
  return out + ".";
}

std::vector<std::string> synonyms(std::mt19937_64& rng, const std::vector<Slot>& slots) {
  std::vector<std::string> words;
  for (const auto& s : slots) words.push_back(kGroups[s.group][pick(rng, kGroups[s.group].size())]);
  return words;
}

corpus::HumanJudgment segment_score(const std::string& system, const std::string& segment, double value) {
  corpus::HumanJudgment j;
  j.kind = corpus::JudgmentKind::segment_score;
  j.system_id = system;
  j.segment_id = segment;
  j.value = value;
  return j;
}

// Cache records for `texts[k]` answering request k of the diverse plan.
void add_generations(const corpus::Benchmark& b, const std::string& segment_id, const std::vector<std::string>& texts,
                     const diversifier::GenerationParams& params, std::vector<corpus::DiversifiedRecord>& out) {
  corpus::Benchmark one = b;
  std::erase_if(one.reference_sets, [&](const auto& r) { return r.segment_id != segment_id; });
  const auto plan = diversifier::plan_generations(one, diversifier::PromptSet::diverse, static_cast<int>(texts.size()));
  for (std::size_t k = 0; k < plan.size(); ++k) {
    out.push_back({segment_id, plan[k].prompt_id, plan[k].sample_index, params.model_id, texts[k], kCreatedAt,
                   diversifier::params_digest(plan[k].prompt, params), std::nullopt});
  }
}

void write_fixture(const fs::path& dir, const corpus::Benchmark& b, const std::vector<corpus::DiversifiedRecord>& cache,
                   const std::string& run_conf) {
  fs::create_directories(dir);
  corpus::save_native(b, dir / "benchmark.jsonl");
  corpus::save_records(cache, dir / "cache.jsonl");
  util::write_file(dir / "provider.conf", kProvider);
  util::write_file(dir / "run.conf", run_conf);
}

void synthetic(std::uint64_t seed, const fs::path& dir) {
  constexpr std::size_t kSegments = 60, kSlots = 8, kGenerations = 10;
  const std::vector<std::pair<std::string, double>> systems = {{"sysA", 0.05}, {"sysB", 0.15}, {"sysC", 0.25},
                                                               {"sysD", 0.35}, {"sysE", 0.45}, {"sysF", 0.55}};
  const auto params = diversifier::parse_provider_config(kProvider, "provider.conf").generation_params();
  std::mt19937_64 rng(seed);
  corpus::Benchmark b;
  b.name = "synthetic-synonyms";
  b.task = corpus::Task::translation;
  std::vector<std::vector<std::string>> generations;
  for (std::size_t s = 0; s < kSegments; ++s) {
    const std::string id = "seg" + std::to_string(s + 1);
    std::vector<Slot> slots;
    std::vector<bool> used(kGroups.size(), false);
    while (slots.size() < kSlots) {
      const auto g = pick(rng, kGroups.size());
      if (used[g]) continue;
      used[g] = true;
      slots.push_back({g, kFillers[pick(rng, kFillers.size())]});
    }
    b.segments.push_back({id, "Quellsatz " + std::to_string(s + 1) + ".", {"de", "en"}, std::nullopt});
    b.reference_sets.push_back({id, realize(slots, synonyms(rng, slots)), {}});
    std::vector<std::string> gens;
    for (std::size_t k = 0; k < kGenerations; ++k) gens.push_back(realize(slots, synonyms(rng, slots)));
    generations.push_back(std::move(gens));
    for (const auto& [system, error_rate] : systems) {
      auto words = synonyms(rng, slots);
      std::size_t kept = 0;
      for (std::size_t i = 0; i < kSlots; ++i) {
        if (static_cast<double>(rng() % 1000) < error_rate * 1000.0) {
          std::size_t g = pick(rng, kGroups.size());
          while (used[g]) g = pick(rng, kGroups.size());
          words[i] = kGroups[g][pick(rng, kGroups[g].size())];
        } else {
          ++kept;
        }
      }
      b.system_outputs.push_back({system, id, realize(slots, words)});
      b.human_judgments.push_back(segment_score(system, id, static_cast<double>(kept) / kSlots));
    }
  }
  std::vector<corpus::DiversifiedRecord> cache;
  for (std::size_t s = 0; s < kSegments; ++s) add_generations(b, b.segments[s].id, generations[s], params, cache);
  write_fixture(dir, b, cache,
                "# Synthetic synonym-slot fixture; regenerate with make_fixture synthetic --seed " +
                    std::to_string(seed) +
                    ".\n"
                    "benchmark=benchmark.jsonl\n"
                    "format=native\n"
                    "provider_config=provider.conf\n"
                    "cache=cache.jsonl\n"
                    "offline=true\n"
                    "prompt_set=diverse\n"
                    "n_references=10\n"
                    "metrics=bleu,chrf,rouge1,rouge2,rougeL,meteor,cider\n"
                    "aggregation=max\n"
                    "seed=" + std::to_string(seed) + "\n"
                    "output_dir=out\n");
}

void tiny(const fs::path& dir) {
  struct Item {
    std::string source, ground_truth;
    std::vector<std::string> generations;
    std::vector<std::string> outputs;  // sysA, sysB, sysC
    std::vector<double> human;
  };
  const std::vector<Item> items = {
      {"Mein Lieblingsobst ist der Apfel, ihres die Banane.",
       "The apple is my most loved fruit but the banana is her most loved.",
       {"Apples rank as my favorite fruit, but bananas hold that title for her.",
        "Apple is my favorite fruit, but banana is her most beloved.",
        "My most loved fruit is the apple, while her most loved is the banana."},
       {"My favorite fruit is apple, while hers beloved is banana.", "The apple is my fruit and banana her.",
        "I like fruit."},
       {82.0, 55.0, 20.0}},
      {"Gibt es eine Möglichkeit, ihn zu bestrafen?", "Is there a way to punish him?",
       {"Can he be penalized?", "Is there any way he can be punished?", "Could we find a way to discipline him?"},
       {"Can he be punished?", "Is there a way to punishment him?", "There is way."},
       {90.0, 60.0, 15.0}},
      {"Der Zug kam mit zehn Minuten Verspätung an.", "The train arrived ten minutes late.",
       {"The train was ten minutes late.", "Ten minutes behind schedule, the train arrived.",
        "The train got in with a ten-minute delay."},
       {"The train arrived with a ten minute delay.", "The train came ten minutes.", "Train late ten arrived the."},
       {88.0, 50.0, 35.0}},
      {"Sie hat das Buch gestern Abend zu Ende gelesen.", "She finished reading the book last night.",
       {"Last night she finished the book.", "She completed the book yesterday evening.",
        "She read the book to the end last night."},
       {"She finished the book yesterday evening.", "She has read the book last evening to end.",
        "The book was night."},
       {92.0, 58.0, 10.0}},
      {"Bitte schließen Sie das Fenster, es ist kalt.", "Please close the window, it is cold.",
       {"Please shut the window, it's cold.", "It is cold, so please close the window.",
        "Kindly close the window because it is chilly."},
       {"Please shut the window, it is cold.", "Please close window, is cold.", "Open the door."},
       {95.0, 70.0, 5.0}},
  };
  const auto params = diversifier::parse_provider_config(kProvider, "provider.conf").generation_params();
  corpus::Benchmark b;
  b.name = "tiny-five";
  b.task = corpus::Task::translation;
  const std::vector<std::string> systems = {"sysA", "sysB", "sysC"};
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string id = "t" + std::to_string(i + 1);
    b.segments.push_back({id, items[i].source, {"de", "en"}, std::nullopt});
    b.reference_sets.push_back({id, items[i].ground_truth, {}});
    for (std::size_t s = 0; s < systems.size(); ++s) {
      b.system_outputs.push_back({systems[s], id, items[i].outputs[s]});
      b.human_judgments.push_back(segment_score(systems[s], id, items[i].human[s]));
    }
  }
  std::vector<corpus::DiversifiedRecord> cache;
  for (std::size_t i = 0; i < items.size(); ++i) add_generations(b, b.segments[i].id, items[i].generations, params, cache);
  write_fixture(dir, b, cache,
                "# Five-segment end-to-end fixture; regenerate with make_fixture tiny.\n"
                "benchmark=benchmark.jsonl\n"
                "format=native\n"
                "provider_config=provider.conf\n"
                "cache=cache.jsonl\n"
                "offline=true\n"
                "prompt_set=diverse\n"
                "n_references=3\n"
                "metrics=bleu,chrf,rougeL,meteor\n"
                "aggregation=max\n"
                "seed=0\n"
                "output_dir=out\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Writes the bundled fixtures"};
  app.require_subcommand(1);
  std::uint64_t seed = 13;
  std::string out;
  auto* syn = app.add_subcommand("synthetic", "Synonym-slot sweep fixture");
  syn->add_option("--seed", seed, "RNG seed");
  syn->add_option("--out", out, "Output directory")->required();
  auto* small = app.add_subcommand("tiny", "Five-segment fixture");
  small->add_option("--out", out, "Output directory")->required();
  CLI11_PARSE(app, argc, argv);
  try {
    if (*syn) synthetic(seed, out);
    if (*small) tiny(out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
