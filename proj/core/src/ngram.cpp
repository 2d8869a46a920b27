#include "tracklist/ngram.hpp"

#include "tracklist/error.hpp"

namespace tracklist {
namespace {

void check_range(std::size_t n_min, std::size_t n_max) {
  if (n_min < 1 || n_min > n_max) {
    throw ArgumentError("n-gram range must satisfy 1 <= n_min <= n_max, got [" +
                        std::to_string(n_min) + ", " + std::to_string(n_max) + "]");
  }
}

}  // namespace

std::size_t ngram_count(std::size_t length, std::size_t n_min, std::size_t n_max) {
  check_range(n_min, n_max);
  std::size_t total = 0;
  for (std::size_t n = n_min; n <= n_max && n <= length; ++n) total += length - n + 1;
  return total;
}

std::vector<NgramSpan> enumerate_ngrams(std::span<const std::string> tokens, std::size_t n_min,
                                        std::size_t n_max) {
  check_range(n_min, n_max);
  std::vector<NgramSpan> spans;
  spans.reserve(ngram_count(tokens.size(), n_min, n_max));
  for (std::size_t start = 0; start < tokens.size(); ++start) {
    for (std::size_t n = n_min; n <= n_max && start + n <= tokens.size(); ++n) {
      auto sub = tokens.subspan(start, n);
      spans.push_back({Phrase(std::vector<std::string>(sub.begin(), sub.end())), start});
    }
  }
  return spans;
}

}  // namespace tracklist
