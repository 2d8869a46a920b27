#include "tracklist/text.hpp"

#include <cstdio>

#include "tracklist/error.hpp"

namespace tracklist {
namespace {

constexpr char32_t kInvalid = 0xFFFD;

// Decodes one code point starting at s[i] and advances i. Malformed sequences
// consume a single byte and yield U+FFFD.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3, cp = b0 & 0x07, min = 0x10000;
  } else {
    ++i;
    return kInvalid;
  }
  if (i + extra >= s.size()) {
    ++i;
    return kInvalid;
  }
  for (int k = 1; k <= extra; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return kInvalid;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++i;
    return kInvalid;
  }
  i += extra + 1;
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
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

bool in(char32_t c, char32_t lo, char32_t hi) { return c >= lo && c <= hi; }

// Non-ASCII code points count as word characters unless they fall in a known
// punctuation, symbol, space or special block.
bool is_word_char(char32_t c) {
  if (c < 0x80) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
  }
  if (in(c, 0x80, 0xBF)) return c == 0xAA || c == 0xB5 || c == 0xBA;
  if (c == 0xD7 || c == 0xF7) return false;
  if (c == 0x37E || c == 0x387) return false;
  if (in(c, 0x55A, 0x55F) || c == 0x589) return false;
  if (c == 0x5BE || c == 0x5C0 || c == 0x5C3 || c == 0x5C6 || in(c, 0x5F3, 0x5F4)) return false;
  if (in(c, 0x600, 0x60F) || c == 0x61B || in(c, 0x61E, 0x61F) || in(c, 0x66A, 0x66D) ||
      c == 0x6D4)
    return false;
  if (in(c, 0x964, 0x965)) return false;
  if (in(c, 0x1680, 0x1680) || in(c, 0x180E, 0x180E)) return false;
  if (in(c, 0x2000, 0x2BFF)) return false;  // punctuation, symbols, arrows, math, shapes
  if (in(c, 0x2E00, 0x2E7F)) return false;
  if (in(c, 0x3000, 0x303F)) return false;
  if (in(c, 0xD800, 0xF8FF)) return false;  // surrogates, private use
  if (in(c, 0xFE10, 0xFE1F) || in(c, 0xFE30, 0xFE6F) || c == 0xFEFF) return false;
  if (in(c, 0xFF00, 0xFF0F) || in(c, 0xFF1A, 0xFF20) || in(c, 0xFF3B, 0xFF40) ||
      in(c, 0xFF5B, 0xFF65))
    return false;
  if (in(c, 0xFFF0, 0xFFFF)) return false;
  if (in(c, 0x1F000, 0x1FAFF)) return false;  // emoji and pictographs
  if (in(c, 0xF0000, 0x10FFFF)) return false;
  return true;
}

char32_t to_lower(char32_t c) {
  if (c < 0x80) return (c >= 'A' && c <= 'Z') ? c + 0x20 : c;
  if (in(c, 0xC0, 0xDE) && c != 0xD7) return c + 0x20;
  if (in(c, 0x100, 0x137) || in(c, 0x14A, 0x177)) return (c % 2 == 0) ? c + 1 : c;
  if (in(c, 0x139, 0x148) || in(c, 0x179, 0x17E)) return (c % 2 == 1) ? c + 1 : c;
  if (c == 0x178) return 0xFF;
  if (c == 0x386) return 0x3AC;
  if (in(c, 0x388, 0x38A)) return c + 0x25;
  if (c == 0x38C) return 0x3CC;
  if (in(c, 0x38E, 0x38F)) return c + 0x3F;
  if (in(c, 0x391, 0x3A9) && c != 0x3A2) return c + 0x20;
  if (in(c, 0x400, 0x40F)) return c + 0x50;
  if (in(c, 0x410, 0x42F)) return c + 0x20;
  if (in(c, 0x460, 0x481) || in(c, 0x48A, 0x4BF) || in(c, 0x4D0, 0x4FF))
    return (c % 2 == 0) ? c + 1 : c;
  if (in(c, 0xFF21, 0xFF3A)) return c + 0x20;
  return c;
}

}  // namespace

std::vector<std::string> normalize_text(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t cp = decode_utf8(text, i);
    if (cp != kInvalid && is_word_char(cp)) {
      encode_utf8(to_lower(cp), current);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string join_tokens(std::span<const std::string> tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.append(sep);
    out.append(tokens[i]);
  }
  return out;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Phrase::Phrase(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty()) throw ArgumentError("phrase must contain at least one token");
  for (const auto& t : tokens_) {
    const auto norm = normalize_text(t);
    if (norm.size() != 1 || norm.front() != t) {
      throw ArgumentError("token is not normalized: '" + t + "'");
    }
  }
}

Phrase Phrase::from_text(std::string_view text) {
  auto tokens = normalize_text(text);
  if (tokens.empty()) {
    throw ArgumentError("phrase is empty after normalization: '" + std::string(text) + "'");
  }
  return Phrase(std::move(tokens));
}

}  // namespace tracklist
