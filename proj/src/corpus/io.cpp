#include "divref/corpus/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "divref/error.hpp"
#include "divref/text/unicode.hpp"

namespace divref::corpus {

using util::Json;
using OJson = nlohmann::ordered_json;

Format parse_format(std::string_view s) {
  if (s == "wmt") return Format::wmt;
  if (s == "summeval") return Format::summeval;
  if (s == "pascal50s") return Format::pascal50s;
  if (s == "native") return Format::native;
  throw UsageError("unknown benchmark format '" + std::string(s) + "'");
}

namespace {

std::string text_field(const Json& obj, const char* key) { return text::nfc(util::require_string(obj, key)); }

std::optional<std::string> optional_string(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw DataError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

void reject_unknown_fields(const Json& obj, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw DataError("unexpected field '" + key + "'");
    }
  }
}

// ---- native ---------------------------------------------------------------

Provenance provenance_from_json(const Json& obj) {
  const auto type = util::require_string(obj, "type");
  if (type == "human") return HumanProvenance{};
  if (type == "llm") {
    return LlmProvenance{util::require_string(obj, "prompt_id"), util::require_integer(obj, "sample_index"),
                         util::require_string(obj, "model_id")};
  }
  throw DataError("unknown provenance type '" + type + "'");
}

OJson provenance_to_json(const Provenance& p) {
  OJson out;
  if (const auto* llm = std::get_if<LlmProvenance>(&p)) {
    out["type"] = "llm";
    out["prompt_id"] = llm->prompt_id;
    out["sample_index"] = llm->sample_index;
    out["model_id"] = llm->model_id;
  } else {
    out["type"] = "human";
  }
  return out;
}

HumanJudgment judgment_from_json(const Json& obj) {
  HumanJudgment j;
  j.kind = parse_judgment_kind(util::require_string(obj, "judgment_kind"));
  j.segment_id = optional_string(obj, "segment_id");
  j.system_id = optional_string(obj, "system_id");
  if (auto it = obj.find("value"); it != obj.end() && !it->is_null()) j.value = util::require_number(obj, "value");
  if (auto it = obj.find("candidates"); it != obj.end()) {
    if (!it->is_array()) throw DataError("field 'candidates' must be an array");
    for (const auto& c : *it) {
      if (!c.is_string()) throw DataError("candidates must be strings");
      j.candidates.push_back(c.get<std::string>());
    }
  }
  if (auto it = obj.find("preferred_index"); it != obj.end() && !it->is_null()) {
    j.preferred_index = static_cast<int>(util::require_integer(obj, "preferred_index"));
  }
  if (auto a = optional_string(obj, "aspect")) j.aspect = parse_aspect(*a);
  if (auto s = optional_string(obj, "setting")) j.setting = parse_setting(*s);
  j.language_pair = optional_string(obj, "language_pair");
  return j;
}

OJson judgment_to_json(const HumanJudgment& j) {
  OJson out;
  out["kind"] = "judgment";
  out["judgment_kind"] = to_string(j.kind);
  if (j.segment_id) out["segment_id"] = *j.segment_id;
  if (j.system_id) out["system_id"] = *j.system_id;
  if (j.value) out["value"] = *j.value;
  if (!j.candidates.empty()) out["candidates"] = j.candidates;
  if (j.preferred_index) out["preferred_index"] = *j.preferred_index;
  if (j.aspect) out["aspect"] = to_string(*j.aspect);
  if (j.setting) out["setting"] = to_string(*j.setting);
  if (j.language_pair) out["language_pair"] = *j.language_pair;
  return out;
}

void load_native_into(std::istream& in, const std::string& origin, Benchmark& b) {
  bool saw_header = false;
  util::read_jsonl(in, origin, [&](std::size_t, const Json& obj) {
    const auto kind = util::require_string(obj, "kind");
    if (kind == "benchmark") {
      if (saw_header) throw DataError("duplicate benchmark header");
      saw_header = true;
      b.name = util::require_string(obj, "name");
      b.task = parse_task(util::require_string(obj, "task"));
    } else if (kind == "segment") {
      reject_unknown_fields(obj, {"kind", "id", "source_text", "language_pair", "domain_tag"});
      Segment s;
      s.id = util::require_string(obj, "id");
      s.source_text = obj.contains("source_text") ? text_field(obj, "source_text") : std::string{};
      if (auto lp = optional_string(obj, "language_pair")) s.language_pair = LanguagePair::parse(*lp);
      s.domain_tag = optional_string(obj, "domain_tag");
      b.segments.push_back(std::move(s));
    } else if (kind == "reference") {
      reject_unknown_fields(obj, {"kind", "segment_id", "ground_truth", "diversified", "filtered_flags"});
      ReferenceSet r;
      r.segment_id = util::require_string(obj, "segment_id");
      r.ground_truth = text_field(obj, "ground_truth");
      if (auto it = obj.find("diversified"); it != obj.end()) {
        if (!it->is_array()) throw DataError("field 'diversified' must be an array");
        for (const auto& e : *it) {
          r.diversified.push_back({text_field(e, "text"), provenance_from_json(util::require(e, "provenance")), {}});
        }
      }
      if (auto it = obj.find("filtered_flags"); it != obj.end() && !it->is_null()) {
        if (!it->is_array() || it->size() != r.diversified.size()) {
          throw DataError("filtered_flags must be a boolean array parallel to diversified");
        }
        for (std::size_t i = 0; i < it->size(); ++i) {
          const auto& f = (*it)[i];
          if (f.is_null()) continue;
          if (!f.is_boolean()) throw DataError("filtered_flags entries must be booleans or null");
          r.diversified[i].filtered = f.get<bool>();
        }
      }
      b.reference_sets.push_back(std::move(r));
    } else if (kind == "output") {
      reject_unknown_fields(obj, {"kind", "system_id", "segment_id", "hypothesis"});
      b.system_outputs.push_back({util::require_string(obj, "system_id"), util::require_string(obj, "segment_id"),
                                  text_field(obj, "hypothesis")});
    } else if (kind == "judgment") {
      reject_unknown_fields(obj, {"kind", "judgment_kind", "segment_id", "system_id", "value", "candidates",
                                  "preferred_index", "aspect", "setting", "language_pair"});
      b.human_judgments.push_back(judgment_from_json(obj));
    } else {
      throw DataError("unknown record kind '" + kind + "'");
    }
  });
}

// ---- adapters -------------------------------------------------------------

struct SegmentBuilder {
  Benchmark& b;
  std::unordered_map<std::string, std::size_t> index;

  // Returns false if the segment already existed; in that case the source
  // and ground truth must agree with the earlier record.
  bool add(Segment seg, ReferenceSet refs) {
    auto it = index.find(seg.id);
    if (it != index.end()) {
      const auto& prev_seg = b.segments[it->second];
      const auto& prev_refs = b.reference_sets[it->second];
      if (prev_seg.source_text != seg.source_text || prev_refs.ground_truth != refs.ground_truth) {
        throw DataError("segment '" + seg.id + "' appears with differing source or reference texts");
      }
      return false;
    }
    index.emplace(seg.id, b.segments.size());
    b.segments.push_back(std::move(seg));
    b.reference_sets.push_back(std::move(refs));
    return true;
  }
};

std::vector<std::string> string_list(const Json& obj, const char* key) {
  const auto& v = util::require(obj, key);
  if (!v.is_array()) throw DataError(std::string("field '") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw DataError(std::string("field '") + key + "' must contain strings");
    out.push_back(text::nfc(e.get<std::string>()));
  }
  return out;
}

ReferenceSet refs_from_list(const std::string& segment_id, const std::vector<std::string>& refs) {
  if (refs.empty()) throw DataError("segment '" + segment_id + "' has no references");
  ReferenceSet r{segment_id, refs.front(), {}};
  for (std::size_t i = 1; i < refs.size(); ++i) r.diversified.push_back({refs[i], HumanProvenance{}, {}});
  return r;
}

// Flattened WMT export. Segment rows:
//   {"lp","seg_id","source","reference","system","hypothesis","mqm"?,"domain"?,"extra_references"?}
// System rows (optional): {"lp","system","system_score"}
void load_wmt_into(std::istream& in, const std::string& origin, Benchmark& b) {
  b.task = Task::translation;
  SegmentBuilder segments{b, {}};
  util::read_jsonl(in, origin, [&](std::size_t, const Json& obj) {
    const auto lp = util::require_string(obj, "lp");
    if (!obj.contains("seg_id")) {
      HumanJudgment j;
      j.kind = JudgmentKind::system_score;
      j.system_id = util::require_string(obj, "system");
      j.value = util::require_number(obj, "system_score");
      j.language_pair = lp;
      b.human_judgments.push_back(std::move(j));
      return;
    }
    const auto& seg_field = util::require(obj, "seg_id");
    const std::string seg_key = seg_field.is_string() ? seg_field.get<std::string>() : seg_field.dump();
    const std::string segment_id = lp + ":" + seg_key;
    Segment seg{segment_id, text_field(obj, "source"), LanguagePair::parse(lp), optional_string(obj, "domain")};
    std::vector<std::string> refs{text_field(obj, "reference")};
    if (obj.contains("extra_references")) {
      for (auto& r : string_list(obj, "extra_references")) refs.push_back(std::move(r));
    }
    segments.add(std::move(seg), refs_from_list(segment_id, refs));
    const auto system = util::require_string(obj, "system");
    b.system_outputs.push_back({system, segment_id, text_field(obj, "hypothesis")});
    if (auto it = obj.find("mqm"); it != obj.end() && !it->is_null()) {
      HumanJudgment j;
      j.kind = JudgmentKind::segment_score;
      j.segment_id = segment_id;
      j.system_id = system;
      j.value = util::require_number(obj, "mqm");
      b.human_judgments.push_back(std::move(j));
    }
  });
}

// SummEval paired annotations:
//   {"id","text","references":[...],"model_id","decoded","expert_annotations":[{aspect: score}...]}
void load_summeval_into(std::istream& in, const std::string& origin, Benchmark& b) {
  b.task = Task::summarization;
  SegmentBuilder segments{b, {}};
  util::read_jsonl(in, origin, [&](std::size_t, const Json& obj) {
    const auto id = util::require_string(obj, "id");
    segments.add(Segment{id, text_field(obj, "text"), LanguagePair{"en", "en"}, std::nullopt},
                 refs_from_list(id, string_list(obj, "references")));
    const auto system = util::require_string(obj, "model_id");
    b.system_outputs.push_back({system, id, text_field(obj, "decoded")});
    const auto& annotations = util::require(obj, "expert_annotations");
    if (!annotations.is_array() || annotations.empty()) {
      throw DataError("expert_annotations must be a non-empty array");
    }
    for (Aspect aspect : {Aspect::coherence, Aspect::consistency, Aspect::fluency, Aspect::relevance}) {
      const std::string key(to_string(aspect));
      double sum = 0.0;
      for (const auto& a : annotations) sum += util::require_number(a, key.c_str());
      HumanJudgment j;
      j.kind = JudgmentKind::aspect_score;
      j.segment_id = id;
      j.system_id = system;
      j.aspect = aspect;
      j.value = sum / static_cast<double>(annotations.size());
      b.human_judgments.push_back(std::move(j));
    }
  });
}

// PASCAL-50S flattened: {"id","candidates":[a,b],"references":[...],"preferred":0|1,"category":"HC"}
void load_pascal_into(std::istream& in, const std::string& origin, Benchmark& b) {
  b.task = Task::caption;
  SegmentBuilder segments{b, {}};
  util::read_jsonl(in, origin, [&](std::size_t, const Json& obj) {
    const auto id = util::require_string(obj, "id");
    const auto candidates = string_list(obj, "candidates");
    if (candidates.size() != 2) throw DataError("preference requires two candidates (instance '" + id + "')");
    if (!segments.add(Segment{id, {}, {}, std::nullopt}, refs_from_list(id, string_list(obj, "references")))) {
      throw DataError("duplicate instance id '" + id + "'");
    }
    b.system_outputs.push_back({"cand0", id, candidates[0]});
    b.system_outputs.push_back({"cand1", id, candidates[1]});
    HumanJudgment j;
    j.kind = JudgmentKind::pairwise_preference;
    j.segment_id = id;
    j.candidates = {"cand0", "cand1"};
    j.preferred_index = static_cast<int>(util::require_integer(obj, "preferred"));
    j.setting = parse_setting(util::require_string(obj, "category"));
    b.human_judgments.push_back(std::move(j));
  });
}

std::string join_violations(const std::vector<std::string>& violations) {
  std::string msg = "invalid benchmark:";
  const std::size_t shown = std::min<std::size_t>(violations.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) msg += "\n  " + violations[i];
  if (violations.size() > shown) msg += "\n  ... " + std::to_string(violations.size() - shown) + " more";
  return msg;
}

std::string judgment_label(std::size_t index, const HumanJudgment& j) {
  return "judgment #" + std::to_string(index) + " (" + std::string(to_string(j.kind)) + ")";
}

}  // namespace

Benchmark load_benchmark(std::istream& in, Format format, const std::string& origin) {
  Benchmark b;
  b.name = std::filesystem::path(origin).stem().string();
  switch (format) {
    case Format::native: load_native_into(in, origin, b); break;
    case Format::wmt: load_wmt_into(in, origin, b); break;
    case Format::summeval: load_summeval_into(in, origin, b); break;
    case Format::pascal50s: load_pascal_into(in, origin, b); break;
  }
  if (auto violations = validate(b); !violations.empty()) {
    throw DataError(origin + ": " + join_violations(violations));
  }
  return b;
}

Benchmark load_benchmark(const std::filesystem::path& path, Format format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return load_benchmark(in, format, path.string());
}

void write_native(const Benchmark& b, std::ostream& out) {
  OJson header;
  header["kind"] = "benchmark";
  header["name"] = b.name;
  header["task"] = to_string(b.task);
  util::write_jsonl_line(out, header);
  for (const auto& s : b.segments) {
    OJson rec;
    rec["kind"] = "segment";
    rec["id"] = s.id;
    rec["source_text"] = s.source_text;
    if (!s.language_pair.empty()) rec["language_pair"] = s.language_pair.str();
    if (s.domain_tag) rec["domain_tag"] = *s.domain_tag;
    util::write_jsonl_line(out, rec);
  }
  for (const auto& r : b.reference_sets) {
    OJson rec;
    rec["kind"] = "reference";
    rec["segment_id"] = r.segment_id;
    rec["ground_truth"] = r.ground_truth;
    OJson div = OJson::array();
    bool any_flag = false;
    for (const auto& e : r.diversified) {
      OJson entry;
      entry["text"] = e.text;
      entry["provenance"] = provenance_to_json(e.provenance);
      div.push_back(std::move(entry));
      any_flag = any_flag || e.filtered.has_value();
    }
    rec["diversified"] = std::move(div);
    if (any_flag) {
      OJson flags = OJson::array();
      for (const auto& e : r.diversified) {
        if (e.filtered) flags.push_back(*e.filtered);
        else flags.push_back(nullptr);
      }
      rec["filtered_flags"] = std::move(flags);
    }
    util::write_jsonl_line(out, rec);
  }
  for (const auto& o : b.system_outputs) {
    OJson rec;
    rec["kind"] = "output";
    rec["system_id"] = o.system_id;
    rec["segment_id"] = o.segment_id;
    rec["hypothesis"] = o.hypothesis;
    util::write_jsonl_line(out, rec);
  }
  for (const auto& j : b.human_judgments) util::write_jsonl_line(out, judgment_to_json(j));
}

void save_native(const Benchmark& benchmark, const std::filesystem::path& path) {
  std::ostringstream out;
  write_native(benchmark, out);
  util::write_file(path, out.str());
}

OJson record_to_json(const DiversifiedRecord& r) {
  OJson out;
  out["segment_id"] = r.segment_id;
  out["prompt_id"] = r.prompt_id;
  out["sample_index"] = r.sample_index;
  out["model_id"] = r.model_id;
  out["text"] = r.text;
  out["created_at"] = r.created_at;
  out["params_digest"] = r.params_digest;
  if (r.filtered) out["filtered"] = *r.filtered;
  return out;
}

DiversifiedRecord record_from_json(const Json& obj) {
  DiversifiedRecord r;
  r.segment_id = util::require_string(obj, "segment_id");
  r.prompt_id = util::require_string(obj, "prompt_id");
  r.sample_index = util::require_integer(obj, "sample_index");
  r.model_id = util::require_string(obj, "model_id");
  r.text = text::nfc(util::require_string(obj, "text"));
  r.created_at = obj.contains("created_at") ? util::require_string(obj, "created_at") : std::string{};
  r.params_digest = util::require_string(obj, "params_digest");
  if (auto it = obj.find("filtered"); it != obj.end() && !it->is_null()) {
    if (!it->is_boolean()) throw DataError("field 'filtered' must be a boolean");
    r.filtered = it->get<bool>();
  }
  return r;
}

std::vector<DiversifiedRecord> load_records(const std::filesystem::path& path) {
  std::vector<DiversifiedRecord> out;
  util::read_jsonl(path, [&](std::size_t, const Json& obj) { out.push_back(record_from_json(obj)); });
  return out;
}

void write_records(std::span<const DiversifiedRecord> records, std::ostream& out) {
  for (const auto& r : records) util::write_jsonl_line(out, record_to_json(r));
}

void save_records(std::span<const DiversifiedRecord> records, const std::filesystem::path& path) {
  std::ostringstream out;
  write_records(records, out);
  util::write_file(path, out.str());
}

Benchmark merge_diversified(const Benchmark& benchmark, std::span<const DiversifiedRecord> records) {
  Benchmark merged = benchmark;
  std::unordered_map<std::string, std::size_t> by_segment;
  for (std::size_t i = 0; i < merged.reference_sets.size(); ++i) by_segment.emplace(merged.reference_sets[i].segment_id, i);
  std::set<std::size_t> touched;
  for (const auto& rec : records) {
    auto it = by_segment.find(rec.segment_id);
    if (it == by_segment.end()) throw DataError("generation for unknown segment '" + rec.segment_id + "'");
    const std::string txt = text::nfc(rec.text);
    if (txt.empty()) throw DataError("empty generation for segment '" + rec.segment_id + "'");
    auto& refs = merged.reference_sets[it->second];
    ReferenceEntry entry{txt, LlmProvenance{rec.prompt_id, rec.sample_index, rec.model_id}, rec.filtered};
    auto existing = std::find_if(refs.diversified.begin(), refs.diversified.end(), [&](const ReferenceEntry& e) {
      return e.text == entry.text && e.provenance == entry.provenance;
    });
    if (existing != refs.diversified.end()) {
      if (entry.filtered) existing->filtered = entry.filtered;
      continue;
    }
    refs.diversified.push_back(std::move(entry));
    touched.insert(it->second);
  }
  for (auto idx : touched) {
    auto& d = merged.reference_sets[idx].diversified;
    std::stable_sort(d.begin(), d.end(), provenance_less);
  }
  return merged;
}

std::vector<std::string> validate(const Benchmark& b) {
  std::vector<std::string> v;
  std::unordered_map<std::string, const Segment*> segments;
  for (const auto& s : b.segments) {
    if (s.id.empty()) v.push_back("segment with empty id");
    if (!segments.emplace(s.id, &s).second) v.push_back("duplicate segment id '" + s.id + "'");
    if (s.source_text.empty() && b.task != Task::caption) v.push_back("segment '" + s.id + "' has empty source_text");
  }
  std::set<std::string> with_refs;
  for (const auto& r : b.reference_sets) {
    if (!segments.count(r.segment_id)) v.push_back("reference set for unknown segment '" + r.segment_id + "'");
    if (!with_refs.insert(r.segment_id).second) v.push_back("duplicate reference set for segment '" + r.segment_id + "'");
    if (r.ground_truth.empty()) v.push_back("segment '" + r.segment_id + "' has empty ground_truth");
    for (std::size_t i = 0; i < r.diversified.size(); ++i) {
      if (r.diversified[i].text.empty()) {
        v.push_back("segment '" + r.segment_id + "' diversified entry " + std::to_string(i) + " is empty");
      }
    }
  }
  for (const auto& s : b.segments) {
    if (!with_refs.count(s.id)) v.push_back("segment '" + s.id + "' has no reference set");
  }
  std::set<std::pair<std::string, std::string>> outputs;
  std::set<std::string> systems;
  for (const auto& o : b.system_outputs) {
    if (!segments.count(o.segment_id)) {
      v.push_back("output of system '" + o.system_id + "' for unknown segment '" + o.segment_id + "'");
    }
    if (!outputs.emplace(o.system_id, o.segment_id).second) {
      v.push_back("duplicate output for system '" + o.system_id + "' segment '" + o.segment_id + "'");
    }
    systems.insert(o.system_id);
  }
  auto expect_output = [&](const std::string& label, const std::string& system, const std::string& segment) {
    if (!outputs.count({system, segment})) {
      v.push_back(label + " references unknown output (system '" + system + "', segment '" + segment + "')");
    }
  };
  for (std::size_t i = 0; i < b.human_judgments.size(); ++i) {
    const auto& j = b.human_judgments[i];
    const auto label = judgment_label(i, j);
    const bool needs_segment = j.kind != JudgmentKind::system_score;
    const bool needs_system = j.kind != JudgmentKind::pairwise_preference;
    const bool needs_value = j.kind != JudgmentKind::pairwise_preference;
    if (needs_segment != j.segment_id.has_value()) v.push_back(label + (needs_segment ? " lacks" : " must not carry") + " segment_id");
    if (needs_system != j.system_id.has_value()) v.push_back(label + (needs_system ? " lacks" : " must not carry") + " system_id");
    if (needs_value != j.value.has_value()) v.push_back(label + (needs_value ? " lacks" : " must not carry") + " value");
    if ((j.kind == JudgmentKind::aspect_score) != j.aspect.has_value()) {
      v.push_back(label + (j.kind == JudgmentKind::aspect_score ? " lacks" : " must not carry") + " aspect");
    }
    if (j.kind == JudgmentKind::pairwise_preference) {
      if (j.candidates.size() != 2) v.push_back(label + ": preference requires two candidates");
      if (!j.preferred_index || (*j.preferred_index != 0 && *j.preferred_index != 1)) {
        v.push_back(label + ": preferred_index must be 0 or 1");
      }
    } else {
      if (!j.candidates.empty()) v.push_back(label + " must not carry candidates");
      if (j.preferred_index) v.push_back(label + " must not carry preferred_index");
      if (j.setting) v.push_back(label + " must not carry setting");
    }
    if (j.language_pair && j.kind != JudgmentKind::system_score) v.push_back(label + " must not carry language_pair");
    if (j.segment_id && !segments.count(*j.segment_id)) v.push_back(label + " references unknown segment '" + *j.segment_id + "'");
    if (j.system_id && !systems.count(*j.system_id)) v.push_back(label + " references unknown system '" + *j.system_id + "'");
    if (j.segment_id && j.system_id && segments.count(*j.segment_id) && systems.count(*j.system_id)) {
      expect_output(label, *j.system_id, *j.segment_id);
    }
    if (j.kind == JudgmentKind::pairwise_preference && j.segment_id) {
      for (const auto& c : j.candidates) expect_output(label, c, *j.segment_id);
    }
  }
  return v;
}

}  // namespace divref::corpus
