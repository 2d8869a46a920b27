#include "tracklist/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "tracklist/error.hpp"
#include "tracklist/text.hpp"

namespace tracklist {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void check_texts(std::span<const std::string> texts) {
  if (texts.empty()) throw ArgumentError("embed_sentences: empty batch");
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (trim(texts[i]).empty()) {
      throw ArgumentError("embed_sentences: text " + std::to_string(i) + " is blank");
    }
  }
}

std::vector<std::string> backend_tokens(std::string_view text) {
  auto tokens = normalize_text(text);
  if (tokens.empty()) tokens.emplace_back(trim(text));
  return tokens;
}

}  // namespace

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ArgumentError("embedding vector must have dim >= 1");
  for (double v : values_) {
    if (!std::isfinite(v)) throw ArgumentError("embedding vector has a non-finite component");
  }
}

std::vector<EmbeddingVector> EmbeddingBackend::embed_sentences(std::span<const std::string> texts) {
  check_texts(texts);
  auto out = do_embed_sentences(texts);
  if (out.size() != texts.size()) {
    throw Error("embedding backend returned " + std::to_string(out.size()) + " vectors for " +
                std::to_string(texts.size()) + " texts");
  }
  const auto dim = descriptor().dim;
  for (const auto& v : out) {
    if (v.dim() != dim) throw Error("embedding backend returned a vector of the wrong dim");
  }
  return out;
}

EmbeddingVector EmbeddingBackend::embed_sentence(std::string_view text) {
  const std::string s(text);
  return std::move(embed_sentences(std::span(&s, 1)).front());
}

TokenEmbeddings EmbeddingBackend::embed_tokens(std::string_view text) {
  if (trim(text).empty()) throw ArgumentError("embed_tokens: text is blank");
  auto out = do_embed_tokens(text);
  if (out.tokens.size() != out.vectors.size() || out.tokens.empty()) {
    throw Error("embedding backend returned mismatched token/vector lists");
  }
  return out;
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.dim() != v.dim()) {
    throw ArgumentError("cosine: dimension mismatch (" + std::to_string(u.dim()) + " vs " +
                        std::to_string(v.dim()) + ")");
  }
  const auto a = u.values();
  const auto b = v.values();
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw ArgumentError("cosine: zero vector");
  // sqrt(na * nb) rather than sqrt(na) * sqrt(nb): for u == v this is exactly na.
  const double c = dot / std::sqrt(na * nb);
  return std::clamp(c, -1.0, 1.0);
}

HashEmbeddingBackend::HashEmbeddingBackend(std::uint64_t seed, std::size_t dim)
    : seed_(seed), dim_(dim) {
  if (dim_ == 0) throw ArgumentError("hash backend dim must be >= 1");
}

BackendDescriptor HashEmbeddingBackend::descriptor() const {
  return {"hash-embedding-v1/seed" + std::to_string(seed_), dim_, true};
}

EmbeddingVector HashEmbeddingBackend::token_vector(std::string_view token) const {
  std::uint64_t state = fnv1a64(token) ^ (seed_ * 0xd1b54a32d192ed03ULL);
  std::vector<double> v(dim_);
  for (auto& x : v) {
    const auto bits = splitmix64(state) >> 11;  // 53 random bits
    x = static_cast<double>(bits) * 0x1.0p-52 - 1.0;
  }
  return EmbeddingVector(std::move(v));
}

std::vector<EmbeddingVector> HashEmbeddingBackend::do_embed_sentences(
    std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    const auto tokens = backend_tokens(text);
    std::vector<double> mean(dim_, 0.0);
    for (const auto& t : tokens) {
      const auto tv = token_vector(t);
      for (std::size_t i = 0; i < dim_; ++i) mean[i] += tv.values()[i];
    }
    for (auto& x : mean) x /= static_cast<double>(tokens.size());
    out.emplace_back(std::move(mean));
  }
  return out;
}

TokenEmbeddings HashEmbeddingBackend::do_embed_tokens(std::string_view text) {
  TokenEmbeddings out;
  out.tokens = backend_tokens(text);
  for (const auto& t : out.tokens) out.vectors.push_back(token_vector(t));
  return out;
}

CachingEmbeddingBackend::CachingEmbeddingBackend(std::shared_ptr<EmbeddingBackend> inner)
    : inner_(std::move(inner)) {
  if (!inner_) throw ArgumentError("caching backend needs an inner backend");
}

std::size_t CachingEmbeddingBackend::cached_sentences() const {
  std::lock_guard lock(mu_);
  return sentences_.size();
}

std::vector<EmbeddingVector> CachingEmbeddingBackend::do_embed_sentences(
    std::span<const std::string> texts) {
  std::vector<std::string> missing;
  {
    std::unordered_set<std::string_view> queued;
    std::lock_guard lock(mu_);
    for (const auto& t : texts) {
      if (!sentences_.contains(t) && queued.insert(t).second) missing.push_back(t);
    }
  }
  if (!missing.empty()) {
    auto fresh = inner_->embed_sentences(missing);
    std::lock_guard lock(mu_);
    for (std::size_t i = 0; i < missing.size(); ++i) {
      sentences_.try_emplace(missing[i], std::move(fresh[i]));
    }
  }
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  std::lock_guard lock(mu_);
  for (const auto& t : texts) out.push_back(sentences_.at(t));
  return out;
}

TokenEmbeddings CachingEmbeddingBackend::do_embed_tokens(std::string_view text) {
  const std::string key(text);
  {
    std::lock_guard lock(mu_);
    if (auto it = tokens_.find(key); it != tokens_.end()) return it->second;
  }
  auto fresh = inner_->embed_tokens(text);
  std::lock_guard lock(mu_);
  return tokens_.try_emplace(key, std::move(fresh)).first->second;
}

}  // namespace tracklist
