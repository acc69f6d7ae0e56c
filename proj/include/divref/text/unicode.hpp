#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace divref::text {

// Unicode Normalization Form C. Invalid UTF-8 raises DataError.
std::string nfc(std::string_view utf8);

// Full Unicode lowercase (root locale), result re-normalized to NFC.
std::string lowercase(std::string_view utf8);

// Decodes UTF-8 into code points. Invalid sequences raise DataError.
std::vector<char32_t> decode_utf8(std::string_view utf8);
void append_utf8(std::string& out, char32_t cp);

bool is_whitespace(char32_t cp) noexcept;
// General category P* (connector, dash, open/close, initial/final, other).
bool is_punctuation(char32_t cp) noexcept;

// Strips leading/trailing Unicode whitespace.
std::string_view trim(std::string_view utf8);

}  // namespace divref::text
