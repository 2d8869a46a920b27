#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tracklist/corpus_index.hpp"
#include "tracklist/text.hpp"

namespace tracklist {

struct CorrelationResult {
  double r = 0.0;
  double p_value = 1.0;  // two-tailed
  std::size_t n = 0;
  std::string x_label;
  std::string y_label;

  bool significant(double alpha = 0.05) const noexcept { return p_value < alpha; }
};

// Pearson r with a two-tailed p-value from Student's t with n-2 degrees of
// freedom. Needs equal lengths >= 3; a constant series throws
// DegenerateInputError naming it.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y,
                          std::string x_label = "x", std::string y_label = "y");

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_tailed(double t, double df);

struct LogFrequencies {
  std::vector<std::size_t> kept_indices;  // positions of nonzero inputs
  std::vector<double> values;             // log10 of those inputs
};

// Drops zero frequencies (reported through kept_indices) and maps the rest
// to log10.
LogFrequencies log_freq(std::span<const std::uint64_t> freqs);

struct CoProbability {
  Phrase term;
  Phrase ngram;
  double value = 0.0;
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 0;
};

// co_doc_freq(term, ngram) / doc_freq(term). Throws ZeroDenominatorError
// when the term never occurs; such terms must be excluded upstream.
CoProbability cooccurrence_probability(const DocFreqIndex& index, const Phrase& term,
                                       const Phrase& ngram);

}  // namespace tracklist
