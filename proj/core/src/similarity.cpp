#include "tracklist/similarity.hpp"

#include <algorithm>
#include <unordered_set>

#include "tracklist/error.hpp"
#include "tracklist/log.hpp"

namespace tracklist {
namespace {

// Mean over rows of the row maximum of the cosine matrix rows x cols.
double greedy_mean(const std::vector<EmbeddingVector>& rows,
                   const std::vector<EmbeddingVector>& cols) {
  double sum = 0.0;
  for (const auto& r : rows) {
    double best = -1.0;
    for (const auto& c : cols) best = std::max(best, cosine(r, c));
    sum += best;
  }
  return sum / static_cast<double>(rows.size());
}

}  // namespace

double f1_score(double precision, double recall) {
  const double denom = precision + recall;
  return denom == 0.0 ? 0.0 : 2.0 * precision * recall / denom;
}

MetricScore bertscore(const TokenEmbeddings& candidate, const TokenEmbeddings& reference,
                      const BackendDescriptor& backend) {
  if (candidate.vectors.empty() || reference.vectors.empty()) {
    throw ArgumentError("bertscore: candidate and reference need at least one token");
  }
  MetricScore s;
  s.metric_name = std::string(kBertScoreMetric);
  s.backend = backend;
  double p = greedy_mean(candidate.vectors, reference.vectors);
  double r = greedy_mean(reference.vectors, candidate.vectors);
  if (p < 0.0 || p > 1.0 || r < 0.0 || r > 1.0) {
    s.clamped = true;
    log::warn("bertscore: clamping P=" + std::to_string(p) + " R=" + std::to_string(r) +
              " to [0,1] (backend " + backend.name + ")");
    p = std::clamp(p, 0.0, 1.0);
    r = std::clamp(r, 0.0, 1.0);
  }
  s.precision = p;
  s.recall = r;
  s.f1 = f1_score(p, r);
  return s;
}

MetricScore bertscore(std::string_view candidate, std::string_view reference,
                      EmbeddingBackend& backend) {
  if (trim(candidate).empty() || trim(reference).empty()) {
    throw ArgumentError("bertscore: candidate and reference must be nonempty");
  }
  const auto c = backend.embed_tokens(candidate);
  const auto r = backend.embed_tokens(reference);
  return bertscore(c, r, backend.descriptor());
}

std::vector<ScoredNgram> term_ngram_similarity(std::string_view term, std::string_view answer,
                                               EmbeddingBackend& backend, std::size_t n_min,
                                               std::size_t n_max, NgramMetric metric) {
  if (trim(term).empty()) throw ArgumentError("term_ngram_similarity: empty term");
  if (trim(answer).empty()) throw ArgumentError("term_ngram_similarity: empty answer");
  const auto tokens = normalize_text(answer);
  auto spans = enumerate_ngrams(tokens, n_min, n_max);
  std::vector<ScoredNgram> out;
  if (spans.empty()) return out;
  out.reserve(spans.size());

  if (metric == NgramMetric::kCosine) {
    const auto term_vec = backend.embed_sentence(term);
    std::vector<std::string> texts;
    texts.reserve(spans.size());
    for (const auto& s : spans) texts.push_back(s.text());
    const auto vecs = backend.embed_sentences(texts);
    for (std::size_t i = 0; i < spans.size(); ++i) {
      out.push_back({std::move(spans[i]), cosine(term_vec, vecs[i]), std::nullopt});
    }
  } else {
    const auto term_tokens = backend.embed_tokens(term);
    const auto desc = backend.descriptor();
    for (auto& s : spans) {
      const auto ng = backend.embed_tokens(s.text());
      const double f1 = bertscore(ng, term_tokens, desc).f1;
      out.push_back({std::move(s), f1, std::nullopt});
    }
  }
  return out;
}

bool ranks_before(const ScoredNgram& a, const ScoredNgram& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  if (a.ngram.n() != b.ngram.n()) return a.ngram.n() > b.ngram.n();
  return a.ngram.start < b.ngram.start;
}

std::vector<ScoredNgram> top_k_ngrams(std::span<const ScoredNgram> scored, std::size_t k) {
  if (k == 0) throw ArgumentError("top_k_ngrams: k must be >= 1");
  std::vector<const ScoredNgram*> order;
  order.reserve(scored.size());
  for (const auto& s : scored) order.push_back(&s);
  std::sort(order.begin(), order.end(),
            [](const ScoredNgram* a, const ScoredNgram* b) { return ranks_before(*a, *b); });
  std::vector<ScoredNgram> out;
  std::unordered_set<std::string> seen;
  for (const auto* s : order) {
    if (out.size() == k) break;
    if (seen.insert(s->ngram.text()).second) out.push_back(*s);
  }
  return out;
}

}  // namespace tracklist
