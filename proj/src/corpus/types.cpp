#include "divref/corpus/types.hpp"

#include <charconv>
#include <tuple>

#include "divref/error.hpp"

namespace divref::corpus {

std::string LanguagePair::str() const {
  if (empty()) return {};
  return source + "-" + target;
}

LanguagePair LanguagePair::parse(std::string_view s) {
  if (s.empty()) return {};
  const auto dash = s.find('-');
  if (dash == std::string_view::npos || dash == 0 || dash + 1 == s.size()) {
    throw DataError("language_pair must look like 'src-tgt', got '" + std::string(s) + "'");
  }
  return {std::string(s.substr(0, dash)), std::string(s.substr(dash + 1))};
}

std::vector<std::string> ReferenceSet::references(bool include_filtered) const {
  std::vector<std::string> out;
  out.reserve(1 + diversified.size());
  out.push_back(ground_truth);
  for (const auto& e : diversified) {
    if (!include_filtered && e.filtered.value_or(false)) continue;
    out.push_back(e.text);
  }
  return out;
}

BenchmarkIndex::BenchmarkIndex(const Benchmark& benchmark) : benchmark_(&benchmark) {
  for (std::size_t i = 0; i < benchmark.segments.size(); ++i) segments_.try_emplace(benchmark.segments[i].id, i);
  for (std::size_t i = 0; i < benchmark.reference_sets.size(); ++i) {
    references_.try_emplace(benchmark.reference_sets[i].segment_id, i);
  }
  for (std::size_t i = 0; i < benchmark.system_outputs.size(); ++i) {
    const auto& o = benchmark.system_outputs[i];
    outputs_.try_emplace(pair_key(o.system_id, o.segment_id), i);
    if (system_ids_.try_emplace(o.system_id, systems_.size()).second) systems_.push_back(o.system_id);
  }
}

std::string BenchmarkIndex::pair_key(std::string_view system_id, std::string_view segment_id) {
  std::string key;
  key.reserve(system_id.size() + segment_id.size() + 1);
  key.append(system_id);
  key.push_back('\x1f');
  key.append(segment_id);
  return key;
}

const Segment* BenchmarkIndex::segment(std::string_view id) const {
  auto it = segments_.find(std::string(id));
  return it == segments_.end() ? nullptr : &benchmark_->segments[it->second];
}

const ReferenceSet* BenchmarkIndex::references(std::string_view segment_id) const {
  auto it = references_.find(std::string(segment_id));
  return it == references_.end() ? nullptr : &benchmark_->reference_sets[it->second];
}

const SystemOutput* BenchmarkIndex::output(std::string_view system_id, std::string_view segment_id) const {
  auto it = outputs_.find(pair_key(system_id, segment_id));
  return it == outputs_.end() ? nullptr : &benchmark_->system_outputs[it->second];
}

bool BenchmarkIndex::has_system(std::string_view system_id) const {
  return system_ids_.count(std::string(system_id)) != 0;
}

std::string DiversifiedRecord::cache_key() const {
  return segment_id + "|" + prompt_id + "|" + std::to_string(sample_index) + "|" + model_id + "|" + params_digest;
}

std::string_view to_string(Task t) noexcept {
  switch (t) {
    case Task::translation: return "translation";
    case Task::summarization: return "summarization";
    case Task::caption: return "caption";
  }
  return "translation";
}

std::string_view to_string(JudgmentKind k) noexcept {
  switch (k) {
    case JudgmentKind::segment_score: return "segment_score";
    case JudgmentKind::system_score: return "system_score";
    case JudgmentKind::aspect_score: return "aspect_score";
    case JudgmentKind::pairwise_preference: return "pairwise_preference";
  }
  return "segment_score";
}

std::string_view to_string(Aspect a) noexcept {
  switch (a) {
    case Aspect::coherence: return "coherence";
    case Aspect::consistency: return "consistency";
    case Aspect::fluency: return "fluency";
    case Aspect::relevance: return "relevance";
  }
  return "coherence";
}

std::string_view to_string(PreferenceSetting s) noexcept {
  switch (s) {
    case PreferenceSetting::HC: return "HC";
    case PreferenceSetting::HI: return "HI";
    case PreferenceSetting::HM: return "HM";
    case PreferenceSetting::MM: return "MM";
  }
  return "HC";
}

Task parse_task(std::string_view s) {
  if (s == "translation") return Task::translation;
  if (s == "summarization") return Task::summarization;
  if (s == "caption") return Task::caption;
  throw DataError("unknown task '" + std::string(s) + "'");
}

JudgmentKind parse_judgment_kind(std::string_view s) {
  if (s == "segment_score") return JudgmentKind::segment_score;
  if (s == "system_score") return JudgmentKind::system_score;
  if (s == "aspect_score") return JudgmentKind::aspect_score;
  if (s == "pairwise_preference") return JudgmentKind::pairwise_preference;
  throw DataError("unknown judgment kind '" + std::string(s) + "'");
}

Aspect parse_aspect(std::string_view s) {
  if (s == "coherence") return Aspect::coherence;
  if (s == "consistency") return Aspect::consistency;
  if (s == "fluency") return Aspect::fluency;
  if (s == "relevance") return Aspect::relevance;
  throw DataError("unknown aspect '" + std::string(s) + "'");
}

PreferenceSetting parse_setting(std::string_view s) {
  if (s == "HC") return PreferenceSetting::HC;
  if (s == "HI") return PreferenceSetting::HI;
  if (s == "HM") return PreferenceSetting::HM;
  if (s == "MM") return PreferenceSetting::MM;
  throw DataError("unknown preference setting '" + std::string(s) + "'");
}

int prompt_rank(std::string_view prompt_id) noexcept {
  if (prompt_id == "basic") return 11;
  if (prompt_id.size() >= 2 && prompt_id[0] == 'p') {
    int n = 0;
    auto [ptr, ec] = std::from_chars(prompt_id.data() + 1, prompt_id.data() + prompt_id.size(), n);
    if (ec == std::errc() && ptr == prompt_id.data() + prompt_id.size() && n >= 1 && n <= 10) return n;
  }
  return 12;
}

bool provenance_less(const ReferenceEntry& a, const ReferenceEntry& b) {
  const auto* la = std::get_if<LlmProvenance>(&a.provenance);
  const auto* lb = std::get_if<LlmProvenance>(&b.provenance);
  if (la == nullptr || lb == nullptr) return la == nullptr && lb != nullptr;
  return std::forward_as_tuple(la->sample_index, prompt_rank(la->prompt_id), la->prompt_id, la->model_id, a.text) <
         std::forward_as_tuple(lb->sample_index, prompt_rank(lb->prompt_id), lb->prompt_id, lb->model_id, b.text);
}

}  // namespace divref::corpus
