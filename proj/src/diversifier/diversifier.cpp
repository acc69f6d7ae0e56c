#include "divref/diversifier/diversifier.hpp"

#include <atomic>
#include <ctime>
#include <map>
#include <mutex>

#include "divref/corpus/types.hpp"
#include "divref/text/unicode.hpp"
#include "divref/util/digest.hpp"
#include "divref/util/jsonl.hpp"
#include "divref/util/parallel.hpp"

namespace divref::diversifier {

using corpus::DiversifiedRecord;

std::vector<GenerationRequest> plan_generations(const corpus::Benchmark& benchmark, PromptSet prompt_set, int n) {
  if (n < 0) throw UsageError("number of generations must be >= 0");
  std::vector<GenerationRequest> plan;
  if (n == 0) return plan;
  std::map<std::string, const corpus::Segment*> segments;
  for (const auto& s : benchmark.segments) segments.emplace(s.id, &s);
  for (const auto& refs : benchmark.reference_sets) {
    const auto* seg = segments.at(refs.segment_id);
    const std::string language = seg->language_pair.target.empty() ? "en" : seg->language_pair.target;
    const auto prompts = prompts_for(prompt_set, language);
    for (int k = 0; k < n; ++k) {
      const auto& prompt = prompts[static_cast<std::size_t>(k) % prompts.size()];
      const auto sample = static_cast<std::int64_t>(static_cast<std::size_t>(k) / prompts.size());
      plan.push_back({refs.segment_id, prompt.id, sample, build_prompt(prompt, refs.ground_truth)});
    }
  }
  return plan;
}

std::string params_digest(const std::string& prompt, const GenerationParams& params) {
  nlohmann::ordered_json j;
  j["prompt"] = prompt;
  j["model_id"] = params.model_id;
  j["temperature"] = params.temperature;
  j["top_p"] = params.top_p;
  return util::sha256_hex(j.dump());
}

std::string postprocess(std::string_view raw) {
  std::string_view t = text::trim(raw);
  static const std::vector<std::pair<std::string_view, std::string_view>> quotes = {
      {"\"", "\""}, {"'", "'"}, {"\xE2\x80\x9C", "\xE2\x80\x9D"}, {"\xE2\x80\x98", "\xE2\x80\x99"},
      {"\xC2\xAB", "\xC2\xBB"}, {"\xE2\x80\x9E", "\xE2\x80\x9C"}};
  for (const auto& [open, close] : quotes) {
    if (t.size() >= open.size() + close.size() && t.substr(0, open.size()) == open &&
        t.substr(t.size() - close.size()) == close) {
      t = text::trim(t.substr(open.size(), t.size() - open.size() - close.size()));
      break;
    }
  }
  return text::nfc(t);
}

std::string utc_now_iso8601() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

DiversifiedRecord keyed_record(const GenerationRequest& req, const GenerationParams& params) {
  DiversifiedRecord r;
  r.segment_id = req.segment_id;
  r.prompt_id = req.prompt_id;
  r.sample_index = req.sample_index;
  r.model_id = params.model_id;
  r.params_digest = params_digest(req.prompt, params);
  return r;
}

RetryPolicy effective_policy(const GenerateOptions& options, int max_attempts) {
  RetryPolicy p = options.retry;
  p.max_attempts = max_attempts;
  return p;
}

}  // namespace

std::vector<DiversifiedRecord> generate_diversified(const corpus::Benchmark& benchmark, PromptSet prompt_set, int n,
                                                    const GenerationParams& params, CompletionProvider& provider,
                                                    GenerationCache& cache, const GenerateOptions& options) {
  params.validate();
  const auto plan = plan_generations(benchmark, prompt_set, n);
  std::vector<std::optional<DiversifiedRecord>> results(plan.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    auto rec = keyed_record(plan[i], params);
    if (auto hit = cache.find(rec.cache_key())) results[i] = std::move(*hit);
    else pending.push_back(i);
  }

  const auto policy = effective_policy(options, params.max_attempts);
  std::vector<std::string> failures(plan.size());
  util::parallel_for(pending.size(), options.max_concurrency, [&](std::size_t p) {
    const std::size_t i = pending[p];
    auto rec = keyed_record(plan[i], params);
    try {
      rec.text = with_retries<std::string>(policy, [&] {
        auto text = postprocess(provider.complete(plan[i].prompt, params));
        if (text.empty()) throw TransientProviderError("empty generation");
        return text;
      });
    } catch (const ProviderError& e) {
      failures[i] = e.what();
      return;
    }
    rec.created_at = options.clock ? options.clock() : utc_now_iso8601();
    cache.append(rec);
    results[i] = std::move(rec);
  });

  std::vector<std::string> missing;
  std::string first_error;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (results[i]) continue;
    missing.push_back(keyed_record(plan[i], params).cache_key());
    if (first_error.empty()) first_error = failures[i];
  }
  if (!missing.empty()) {
    throw ProviderError(std::to_string(missing.size()) + " of " + std::to_string(plan.size()) +
                            " generations could not be produced (" + first_error + ")",
                        std::move(missing));
  }
  std::vector<DiversifiedRecord> out;
  out.reserve(results.size());
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

std::vector<DiversifiedRecord> dedupe(const std::vector<DiversifiedRecord>& records) {
  // (segment, text) -> index of the record to keep
  std::map<std::pair<std::string, std::string>, std::size_t> best;
  auto rank = [&](std::size_t i) {
    return std::make_pair(corpus::prompt_rank(records[i].prompt_id), records[i].sample_index);
  };
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto [it, inserted] = best.emplace(std::make_pair(records[i].segment_id, records[i].text), i);
    if (!inserted && rank(i) < rank(it->second)) it->second = i;
  }
  std::vector<bool> keep(records.size(), false);
  for (const auto& [key, i] : best) keep[i] = true;
  std::vector<DiversifiedRecord> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (keep[i]) out.push_back(records[i]);
  }
  return out;
}

FilterResult filter_subpar(const std::vector<DiversifiedRecord>& records,
                           const std::vector<corpus::ReferenceSet>& reference_sets, CompletionProvider& judge,
                           const GenerationParams& judge_params, const GenerateOptions& options,
                           AnswerCache* answers_cache) {
  std::unordered_map<std::string, const std::string*> ground_truth;
  for (const auto& r : reference_sets) ground_truth.emplace(r.segment_id, &r.ground_truth);
  for (const auto& r : records) {
    if (!ground_truth.count(r.segment_id)) throw DataError("generation for unknown segment '" + r.segment_id + "'");
  }
  const auto policy = effective_policy(options, judge_params.max_attempts);
  std::vector<std::optional<bool>> verdicts(records.size());
  std::vector<std::string> answers(records.size());
  util::parallel_for(records.size(), options.max_concurrency, [&](std::size_t i) {
    const auto prompt = judge_prompt(*ground_truth.at(records[i].segment_id), records[i].text);
    const auto key = params_digest(prompt, judge_params);
    if (auto hit = answers_cache ? answers_cache->find(key) : std::nullopt) {
      answers[i] = *hit;
    } else {
      answers[i] = with_retries<std::string>(policy, [&] { return judge.complete(prompt, judge_params); });
      if (answers_cache) answers_cache->append(key, answers[i]);
    }
    verdicts[i] = parse_judgment(answers[i]);
  });

  FilterResult result;
  result.records = records;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& r = result.records[i];
    if (!verdicts[i]) {
      ++result.unparseable;
      ++result.kept;
      r.filtered = false;
      result.warnings.push_back("unparseable judge answer for " + r.cache_key() + ": '" +
                                std::string(text::trim(answers[i])).substr(0, 80) + "' (kept)");
    } else if (*verdicts[i]) {
      ++result.kept;
      r.filtered = false;
    } else {
      ++result.flagged;
      r.filtered = true;
    }
  }
  return result;
}

}  // namespace divref::diversifier
