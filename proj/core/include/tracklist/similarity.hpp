#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tracklist/embedding.hpp"
#include "tracklist/ngram.hpp"

namespace tracklist {

// Greedy token matching without IDF weighting or baseline rescaling.
inline constexpr std::string_view kBertScoreMetric = "bertscore-greedy-noidf-nobaseline";

struct MetricScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::string metric_name;
  BackendDescriptor backend;
  bool clamped = false;  // a component fell outside [0, 1] and was clamped
};

double f1_score(double precision, double recall);

// precision: mean over candidate tokens of the best cosine to any reference
// token; recall: the same with roles swapped. Components are clamped to
// [0, 1] (and the event logged) when negative cosines push them below zero.
MetricScore bertscore(std::string_view candidate, std::string_view reference,
                      EmbeddingBackend& backend);
MetricScore bertscore(const TokenEmbeddings& candidate, const TokenEmbeddings& reference,
                      const BackendDescriptor& backend);

enum class NgramMetric { kCosine, kBertScore };

struct ScoredNgram {
  NgramSpan ngram;
  double similarity = 0.0;
  std::optional<double> co_prob;  // set once the corpus has been consulted
};

// Scores every n-gram of the normalized answer against the whole term, in
// enumerate_ngrams order. kCosine compares sentence embeddings; kBertScore
// uses the F1 of bertscore(ngram, term). Answers shorter than n_min tokens
// give an empty list.
std::vector<ScoredNgram> term_ngram_similarity(std::string_view term, std::string_view answer,
                                               EmbeddingBackend& backend, std::size_t n_min = 2,
                                               std::size_t n_max = 5,
                                               NgramMetric metric = NgramMetric::kCosine);

// Best `k` after collapsing repeated surface forms, sorted by similarity
// descending with ties broken by longer n, then earlier start.
std::vector<ScoredNgram> top_k_ngrams(std::span<const ScoredNgram> scored, std::size_t k = 3);

// Strict ordering used by top_k_ngrams.
bool ranks_before(const ScoredNgram& a, const ScoredNgram& b);

}  // namespace tracklist
