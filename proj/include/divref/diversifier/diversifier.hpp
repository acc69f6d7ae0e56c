#pragma once

#include <functional>
#include <string>
#include <vector>

#include "divref/corpus/types.hpp"
#include "divref/diversifier/cache.hpp"
#include "divref/diversifier/prompts.hpp"
#include "divref/diversifier/provider.hpp"

namespace divref::diversifier {

// One planned generation for one segment.
struct GenerationRequest {
  std::string segment_id;
  std::string prompt_id;
  std::int64_t sample_index = 0;
  std::string prompt;
};

// diverse / multilingual: request k uses prompt p((k mod 10) + 1) with
// sample_index k / 10, so n <= 10 gives one generation per prompt p1..pn.
// basic: request k uses the basic prompt with sample_index k.
std::vector<GenerationRequest> plan_generations(const corpus::Benchmark& benchmark, PromptSet prompt_set, int n);

// SHA-256 over the prompt text and the sampling parameters that influence
// the output.
std::string params_digest(const std::string& prompt, const GenerationParams& params);

// Strips surrounding whitespace and one layer of matching enclosing quotes.
std::string postprocess(std::string_view text);

struct GenerateOptions {
  std::size_t max_concurrency = 4;
  RetryPolicy retry{};
  // ISO-8601 UTC timestamp for new records.
  std::function<std::string()> clock;
};

// Fills every planned request from the cache or the provider. New records are
// appended to the cache as soon as they arrive. Results follow plan order.
// If some requests still fail after max_attempts, the successful ones are
// already cached and a ProviderError lists the missing cache keys.
std::vector<corpus::DiversifiedRecord> generate_diversified(const corpus::Benchmark& benchmark, PromptSet prompt_set,
                                                            int n, const GenerationParams& params,
                                                            CompletionProvider& provider, GenerationCache& cache,
                                                            const GenerateOptions& options = {});

// Collapses identical texts within a segment, keeping the record with the
// lowest (prompt rank, sample_index). Survivors keep their input order.
std::vector<corpus::DiversifiedRecord> dedupe(const std::vector<corpus::DiversifiedRecord>& records);

struct FilterResult {
  std::vector<corpus::DiversifiedRecord> records;
  std::size_t kept = 0;
  std::size_t flagged = 0;
  // Answers with neither "yes" nor "no"; those records are kept.
  std::size_t unparseable = 0;
  std::vector<std::string> warnings;
};

// Asks the judge whether each generation preserves its ground truth's meaning
// and sets `filtered` accordingly (true = judged not equivalent). Answers are
// looked up in and added to `answers` when given, keyed by the digest of the
// judge prompt and parameters.
FilterResult filter_subpar(const std::vector<corpus::DiversifiedRecord>& records,
                           const std::vector<corpus::ReferenceSet>& reference_sets, CompletionProvider& judge,
                           const GenerationParams& judge_params, const GenerateOptions& options = {},
                           AnswerCache* answers = nullptr);

std::string utc_now_iso8601();

}  // namespace divref::diversifier
