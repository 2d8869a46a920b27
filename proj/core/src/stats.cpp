#include "tracklist/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tracklist/error.hpp"

namespace tracklist {
namespace {

// Continued fraction for I_x(a, b) by the modified Lentz method.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw ArgumentError("incomplete_beta: a and b must be positive");
  if (x < 0.0 || x > 1.0) throw ArgumentError("incomplete_beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_tailed(double t, double df) {
  if (!(df > 0.0)) throw ArgumentError("student_t_two_tailed: df must be positive");
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return std::clamp(incomplete_beta(df / 2.0, 0.5, x), 0.0, 1.0);
}

CorrelationResult pearson(std::span<const double> x, std::span<const double> y,
                          std::string x_label, std::string y_label) {
  if (x.size() != y.size()) {
    throw ArgumentError("pearson: length mismatch (" + std::to_string(x.size()) + " vs " +
                        std::to_string(y.size()) + ")");
  }
  if (x.size() < 3) throw ArgumentError("pearson: need at least 3 samples");

  // Single pass over co-moments (Welford).
  double mean_x = 0.0, mean_y = 0.0, m2x = 0.0, m2y = 0.0, cxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw ArgumentError("pearson: non-finite sample at index " + std::to_string(i));
    }
    const double n = static_cast<double>(i + 1);
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    mean_x += dx / n;
    mean_y += dy / n;
    m2x += dx * (x[i] - mean_x);
    m2y += dy * (y[i] - mean_y);
    cxy += dx * (y[i] - mean_y);
  }
  if (m2x == 0.0) throw DegenerateInputError("pearson: series '" + x_label + "' is constant", x_label);
  if (m2y == 0.0) throw DegenerateInputError("pearson: series '" + y_label + "' is constant", y_label);

  CorrelationResult res;
  res.n = x.size();
  res.x_label = std::move(x_label);
  res.y_label = std::move(y_label);
  res.r = std::clamp(cxy / std::sqrt(m2x * m2y), -1.0, 1.0);
  const double df = static_cast<double>(res.n) - 2.0;
  if (std::fabs(res.r) == 1.0) {
    res.p_value = 0.0;
  } else {
    const double t = res.r * std::sqrt(df / (1.0 - res.r * res.r));
    res.p_value = student_t_two_tailed(t, df);
  }
  return res;
}

LogFrequencies log_freq(std::span<const std::uint64_t> freqs) {
  LogFrequencies out;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (freqs[i] == 0) continue;
    out.kept_indices.push_back(i);
    out.values.push_back(std::log10(static_cast<double>(freqs[i])));
  }
  return out;
}

CoProbability cooccurrence_probability(const DocFreqIndex& index, const Phrase& term,
                                       const Phrase& ngram) {
  const auto denominator = index.doc_freq(term);
  if (denominator == 0) {
    throw ZeroDenominatorError("term '" + term.text() +
                               "' has document frequency 0; exclude it before computing "
                               "co-occurrence probabilities");
  }
  const auto numerator = index.co_doc_freq(term, ngram);
  return {term, ngram, static_cast<double>(numerator) / static_cast<double>(denominator),
          numerator, denominator};
}

}  // namespace tracklist
