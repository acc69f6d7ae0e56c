#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace divref::corpus {

enum class Task { translation, summarization, caption };

struct LanguagePair {
  std::string source;
  std::string target;

  bool empty() const noexcept { return source.empty() && target.empty(); }
  // "src-tgt", or "" when unset.
  std::string str() const;
  static LanguagePair parse(std::string_view s);

  bool operator==(const LanguagePair&) const = default;
};

// One benchmark instance: the input x.
struct Segment {
  std::string id;
  std::string source_text;
  LanguagePair language_pair;
  std::optional<std::string> domain_tag;

  bool operator==(const Segment&) const = default;
};

struct HumanProvenance {
  bool operator==(const HumanProvenance&) const = default;
};

struct LlmProvenance {
  std::string prompt_id;
  std::int64_t sample_index = 0;
  std::string model_id;

  bool operator==(const LlmProvenance&) const = default;
};

using Provenance = std::variant<HumanProvenance, LlmProvenance>;

struct ReferenceEntry {
  std::string text;
  Provenance provenance;
  // Set by the judge filter; true means the entry was judged not to preserve
  // the ground truth's meaning.
  std::optional<bool> filtered;

  bool operator==(const ReferenceEntry&) const = default;
};

// {y*, y~1, ..., y~n} for one segment. Human entries keep their load order
// and come first; LLM entries follow in provenance order (see
// `provenance_less`).
struct ReferenceSet {
  std::string segment_id;
  std::string ground_truth;
  std::vector<ReferenceEntry> diversified;

  // Ground truth first, then diversified entries; filtered entries are
  // skipped unless `include_filtered`.
  std::vector<std::string> references(bool include_filtered = false) const;

  bool operator==(const ReferenceSet&) const = default;
};

struct SystemOutput {
  std::string system_id;
  std::string segment_id;
  std::string hypothesis;

  bool operator==(const SystemOutput&) const = default;
};

enum class JudgmentKind { segment_score, system_score, aspect_score, pairwise_preference };
enum class Aspect { coherence, consistency, fluency, relevance };
enum class PreferenceSetting { HC, HI, HM, MM };

struct HumanJudgment {
  JudgmentKind kind = JudgmentKind::segment_score;
  std::optional<std::string> segment_id;
  std::optional<std::string> system_id;
  std::optional<double> value;
  // pairwise_preference: candidates are two system ids whose outputs for
  // `segment_id` are compared; preferred_index picks one of them.
  std::vector<std::string> candidates;
  std::optional<int> preferred_index;
  std::optional<Aspect> aspect;
  std::optional<PreferenceSetting> setting;
  // system_score judgments of multi-language-pair benchmarks.
  std::optional<std::string> language_pair;

  bool operator==(const HumanJudgment&) const = default;
};

struct Benchmark {
  std::string name;
  Task task = Task::translation;
  std::vector<Segment> segments;
  std::vector<ReferenceSet> reference_sets;
  std::vector<SystemOutput> system_outputs;
  std::vector<HumanJudgment> human_judgments;

  bool operator==(const Benchmark&) const = default;
};

// Lookup tables over a Benchmark. The benchmark must outlive the index and
// must not be mutated while it is in use.
class BenchmarkIndex {
 public:
  explicit BenchmarkIndex(const Benchmark& benchmark);

  const Segment* segment(std::string_view id) const;
  const ReferenceSet* references(std::string_view segment_id) const;
  const SystemOutput* output(std::string_view system_id, std::string_view segment_id) const;
  bool has_system(std::string_view system_id) const;
  // Distinct system ids in first-appearance order.
  const std::vector<std::string>& systems() const noexcept { return systems_; }

 private:
  static std::string pair_key(std::string_view system_id, std::string_view segment_id);

  const Benchmark* benchmark_;
  std::unordered_map<std::string, std::size_t> segments_;
  std::unordered_map<std::string, std::size_t> references_;
  std::unordered_map<std::string, std::size_t> outputs_;
  std::unordered_map<std::string, std::size_t> system_ids_;
  std::vector<std::string> systems_;
};

// One LLM generation: the cache record.
struct DiversifiedRecord {
  std::string segment_id;
  std::string prompt_id;
  std::int64_t sample_index = 0;
  std::string model_id;
  std::string text;
  std::string created_at;
  std::string params_digest;
  std::optional<bool> filtered;

  // (segment_id, prompt_id, sample_index, model_id, params_digest)
  std::string cache_key() const;

  bool operator==(const DiversifiedRecord&) const = default;
};

std::string_view to_string(Task t) noexcept;
std::string_view to_string(JudgmentKind k) noexcept;
std::string_view to_string(Aspect a) noexcept;
std::string_view to_string(PreferenceSetting s) noexcept;
Task parse_task(std::string_view s);
JudgmentKind parse_judgment_kind(std::string_view s);
Aspect parse_aspect(std::string_view s);
PreferenceSetting parse_setting(std::string_view s);

// p1 < p2 < ... < p10 < basic < anything else (lexicographic).
int prompt_rank(std::string_view prompt_id) noexcept;

// Ordering of diversified entries: human entries first (stable), then LLM
// entries by (sample_index, prompt rank, model_id, text).
bool provenance_less(const ReferenceEntry& a, const ReferenceEntry& b);

}  // namespace divref::corpus
