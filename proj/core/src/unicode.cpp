#include "mtgender/unicode.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "mtgender/errors.hpp"

namespace mtg::unicode {
namespace {

struct Range {
  char32_t first;
  char32_t last;
};

constexpr Range kPunctuation[] = {
#include "unicode_punct_table.inc"
};

}  // namespace

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    char32_t cp = 0;
    std::size_t extra = 0;
    if (lead < 0x80) {
      cp = lead;
    } else if ((lead & 0xE0) == 0xC0) {
      cp = lead & 0x1F;
      extra = 1;
    } else if ((lead & 0xF0) == 0xE0) {
      cp = lead & 0x0F;
      extra = 2;
    } else if ((lead & 0xF8) == 0xF0) {
      cp = lead & 0x07;
      extra = 3;
    } else {
      throw SchemaError("invalid UTF-8 lead byte at offset " + std::to_string(i));
    }
    if (extra > 0 && i + extra >= text.size()) {
      throw SchemaError("truncated UTF-8 sequence at offset " + std::to_string(i));
    }
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto cont = static_cast<unsigned char>(text[i + k]);
      if ((cont & 0xC0) != 0x80) {
        throw SchemaError("invalid UTF-8 continuation byte at offset " + std::to_string(i + k));
      }
      cp = (cp << 6) | (cont & 0x3F);
    }
    static constexpr char32_t kMinForLength[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMinForLength[extra]) throw SchemaError("overlong UTF-8 sequence at offset " + std::to_string(i));
    if ((cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
      throw SchemaError("invalid code point in UTF-8 at offset " + std::to_string(i));
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

std::size_t length(std::string_view text) { return decode_utf8(text).size(); }

std::string substr(std::string_view text, std::size_t begin, std::size_t end) {
  const auto decoded = decode_utf8(text);
  end = std::min(end, decoded.size());
  if (begin >= end) return {};
  return encode_utf8(std::u32string_view(decoded).substr(begin, end - begin));
}

bool is_punctuation(char32_t cp) {
  const auto* it = std::upper_bound(std::begin(kPunctuation), std::end(kPunctuation), cp,
                                    [](char32_t value, const Range& r) { return value < r.first; });
  if (it == std::begin(kPunctuation)) return false;
  --it;
  return cp >= it->first && cp <= it->last;
}

bool is_punctuation_word(std::string_view text) {
  const auto decoded = decode_utf8(text);
  return !decoded.empty() && std::all_of(decoded.begin(), decoded.end(), is_punctuation);
}

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace mtg::unicode
