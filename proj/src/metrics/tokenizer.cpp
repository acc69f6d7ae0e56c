#include "divref/metrics/tokenizer.hpp"

#include "divref/text/unicode.hpp"

namespace divref::metrics {

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config) {
  const std::string normalized = config.lowercase ? text::lowercase(text::nfc(text)) : text::nfc(text);
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  };
  for (char32_t cp : text::decode_utf8(normalized)) {
    if (text::is_whitespace(cp)) {
      flush();
    } else if (config.split_punctuation && text::is_punctuation(cp)) {
      flush();
      text::append_utf8(current, cp);
      flush();
    } else {
      text::append_utf8(current, cp);
    }
  }
  flush();
  return tokens;
}

}  // namespace divref::metrics
