#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace divref::diversifier {

struct PromptTemplate {
  std::string id;
  // Either an instruction ending in ':' that the reference is appended to,
  // or a template containing one "{reference}" placeholder.
  std::string instruction;
};

enum class PromptSet { diverse, basic, multilingual };

PromptSet parse_prompt_set(std::string_view s);
std::string_view to_string(PromptSet s) noexcept;

// p1..p10, verbatim English instructions.
const std::vector<PromptTemplate>& diverse_prompts();
// "Paraphrase the sentences: {reference}"
const PromptTemplate& basic_prompt();
// The prompts used for a reference in `language` (ISO 639-1). The
// multilingual set uses bundled translations for de and ru and falls back to
// the English instructions otherwise.
std::vector<PromptTemplate> prompts_for(PromptSet set, std::string_view language);

// Expands the template once. Throws DataError for an empty reference.
std::string build_prompt(const PromptTemplate& prompt, std::string_view reference);

// Meaning-equivalence question sent to the judge.
std::string judge_prompt(std::string_view reference, std::string_view diversified);

// true for "yes", false for "no" (whichever word appears first,
// case-insensitive); nullopt when neither appears.
std::optional<bool> parse_judgment(std::string_view answer);

}  // namespace divref::diversifier
