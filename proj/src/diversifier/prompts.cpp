#include "divref/diversifier/prompts.hpp"

#include <array>

#include "divref/error.hpp"

namespace divref::diversifier {

namespace {

constexpr std::string_view kPlaceholder = "{reference}";

const std::array<const char*, 10> kEnglish = {
    "Change the order of the sentences:",
    "Change the structure of the sentences:",
    "Change the voice of the sentences:",
    "Change the tense of the sentences:",
    "Alter the tone of the sentences:",
    "Alter the style of the sentences:",
    "Rephrase the sentences while retaining the original meaning:",
    "Use synonyms or related words to express the sentences with the same meaning:",
    "Use more formal language to change the level of formality of the sentences:",
    "Use less formal language to change the level of formality of the sentences:",
};

const std::array<const char*, 10> kGerman = {
    "Ändere die Reihenfolge der Sätze:",
    "Ändere die Struktur der Sätze:",
    "Ändere die Handlungsrichtung (Aktiv oder Passiv) der Sätze:",
    "Ändere die Zeitform der Sätze:",
    "Verändere den Ton der Sätze:",
    "Verändere den Stil der Sätze:",
    "Formuliere die Sätze um und behalte dabei die ursprüngliche Bedeutung bei:",
    "Verwende Synonyme oder verwandte Wörter, um die Sätze mit derselben Bedeutung auszudrücken:",
    "Verwende eine förmlichere Sprache, um den Grad der Förmlichkeit der Sätze zu verändern:",
    "Verwende eine weniger förmliche Sprache, um den Grad der Förmlichkeit der Sätze zu verändern:",
};

const std::array<const char*, 10> kRussian = {
    "Измените порядок предложений:",
    "Измените структуру предложений:",
    "Измените залог предложений:",
    "Измените время предложений:",
    "Измените тон предложений:",
    "Измените стиль предложений:",
    "Перефразируйте предложения, сохранив исходный смысл:",
    "Используйте синонимы или близкие по значению слова, чтобы выразить предложения с тем же смыслом:",
    "Используйте более формальный язык, чтобы изменить уровень формальности предложений:",
    "Используйте менее формальный язык, чтобы изменить уровень формальности предложений:",
};

std::vector<PromptTemplate> numbered(const std::array<const char*, 10>& instructions) {
  std::vector<PromptTemplate> out;
  for (std::size_t i = 0; i < instructions.size(); ++i) {
    out.push_back({"p" + std::to_string(i + 1), instructions[i]});
  }
  return out;
}

bool word_at(std::string_view lower, std::size_t pos, std::string_view word) {
  if (lower.compare(pos, word.size(), word) != 0) return false;
  auto is_alpha = [](char c) { return (c >= 'a' && c <= 'z'); };
  if (pos > 0 && is_alpha(lower[pos - 1])) return false;
  const std::size_t end = pos + word.size();
  return end >= lower.size() || !is_alpha(lower[end]);
}

}  // namespace

PromptSet parse_prompt_set(std::string_view s) {
  if (s == "diverse") return PromptSet::diverse;
  if (s == "basic") return PromptSet::basic;
  if (s == "multilingual") return PromptSet::multilingual;
  throw UsageError("unknown prompt set '" + std::string(s) + "' (expected diverse, basic or multilingual)");
}

std::string_view to_string(PromptSet s) noexcept {
  switch (s) {
    case PromptSet::diverse: return "diverse";
    case PromptSet::basic: return "basic";
    case PromptSet::multilingual: return "multilingual";
  }
  return "?";
}

const std::vector<PromptTemplate>& diverse_prompts() {
  static const std::vector<PromptTemplate> prompts = numbered(kEnglish);
  return prompts;
}

const PromptTemplate& basic_prompt() {
  static const PromptTemplate prompt{"basic", "Paraphrase the sentences: {reference}"};
  return prompt;
}

std::vector<PromptTemplate> prompts_for(PromptSet set, std::string_view language) {
  switch (set) {
    case PromptSet::basic: return {basic_prompt()};
    case PromptSet::diverse: return diverse_prompts();
    case PromptSet::multilingual:
      if (language == "de") return numbered(kGerman);
      if (language == "ru") return numbered(kRussian);
      return diverse_prompts();
  }
  return diverse_prompts();
}

std::string build_prompt(const PromptTemplate& prompt, std::string_view reference) {
  if (reference.empty()) throw DataError("cannot build a prompt for an empty reference");
  const auto pos = prompt.instruction.find(kPlaceholder);
  if (pos == std::string::npos) return prompt.instruction + " " + std::string(reference);
  std::string out = prompt.instruction;
  out.replace(pos, kPlaceholder.size(), reference);
  return out;
}

std::string judge_prompt(std::string_view reference, std::string_view diversified) {
  std::string out = "Sentence 1: ";
  out += reference;
  out += "\nSentence 2: ";
  out += diversified;
  out += "\nDo sentence 1 and sentence 2 convey the same meaning?\n\n";
  return out;
}

std::optional<bool> parse_judgment(std::string_view answer) {
  std::string lower(answer);
  for (auto& c : lower) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (word_at(lower, i, "yes")) return true;
    if (word_at(lower, i, "no")) return false;
  }
  return std::nullopt;
}

}  // namespace divref::diversifier
