#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tracklist/text.hpp"

namespace tracklist {

// A contiguous run of `tokens.size()` tokens starting at `start` in its source.
struct NgramSpan {
  Phrase tokens;
  std::size_t start = 0;

  std::size_t n() const noexcept { return tokens.size(); }
  std::string text() const { return tokens.text(); }
};

// Every contiguous n-gram with n in [n_min, n_max], ordered by (start, n).
// Repeated surface forms are kept, one span per occurrence. Throws
// ArgumentError unless 1 <= n_min <= n_max.
std::vector<NgramSpan> enumerate_ngrams(std::span<const std::string> tokens,
                                        std::size_t n_min = 2, std::size_t n_max = 5);

// Closed-form size of enumerate_ngrams' output.
std::size_t ngram_count(std::size_t length, std::size_t n_min, std::size_t n_max);

}  // namespace tracklist
