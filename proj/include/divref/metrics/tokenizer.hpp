#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace divref::metrics {

struct TokenizerConfig {
  bool lowercase = true;
  // Each Unicode punctuation code point (category P*) becomes its own token.
  bool split_punctuation = true;
  // NFC normalization is always applied; the flag exists for record keeping.
  static constexpr bool unicode_nfc = true;
};

// Splits on Unicode whitespace after NFC (and optional lowercasing).
// A pure function of its inputs.
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config = {});

}  // namespace divref::metrics
