#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mtg::unicode {

// Decodes UTF-8. Throws SchemaError on malformed input.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);

// Number of code points in a UTF-8 string.
std::size_t length(std::string_view text);

// Substring by code point range [begin, end).
std::string substr(std::string_view text, std::size_t begin, std::size_t end);

// Unicode General_Category P* (Pc, Pd, Ps, Pe, Pi, Pf, Po).
bool is_punctuation(char32_t cp);

// True for a non-empty string made only of punctuation code points.
bool is_punctuation_word(std::string_view text);

// ASCII lowercasing; bytes >= 0x80 pass through untouched.
std::string ascii_lower(std::string_view text);

}  // namespace mtg::unicode
