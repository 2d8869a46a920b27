#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tracklist {

// Version tag stored in every index file. Bump whenever normalize_text changes
// behaviour, since counts are only comparable under the same normalization.
inline constexpr std::string_view kNormalizationVersion = "tl-norm-v1:lower+alnum+ws";

// Lowercases (Latin, Greek, Cyrillic), turns every code point that is not a
// letter or digit into a separator and splits on separators.
//
//   "Multiple sclerosis (MS)!"   -> {"multiple", "sclerosis", "ms"}
//   "testosterone-inhibiting"    -> {"testosterone", "inhibiting"}
//
// Invalid UTF-8 bytes act as separators. Never throws.
std::vector<std::string> normalize_text(std::string_view text);

std::string join_tokens(std::span<const std::string> tokens, std::string_view sep = " ");

// Leading/trailing ASCII whitespace removed.
std::string_view trim(std::string_view s);

// 64-bit FNV-1a. Used for stable content hashes (config, artifact stamps).
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

// A nonempty sequence of normalized tokens.
class Phrase {
 public:
  // Throws ArgumentError when `tokens` is empty or any token is not in
  // normalized form.
  explicit Phrase(std::vector<std::string> tokens);

  // Normalizes `text`; throws ArgumentError if nothing survives.
  static Phrase from_text(std::string_view text);

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  std::string text() const { return join_tokens(tokens_); }

  friend bool operator==(const Phrase&, const Phrase&) = default;
  friend auto operator<=>(const Phrase&, const Phrase&) = default;

 private:
  std::vector<std::string> tokens_;
};

}  // namespace tracklist
