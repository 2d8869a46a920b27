#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tracklist {

// Fixed-length vector of finite reals.
class EmbeddingVector {
 public:
  // Throws ArgumentError on an empty or non-finite vector.
  explicit EmbeddingVector(std::vector<double> values);

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

 private:
  std::vector<double> values_;
};

struct BackendDescriptor {
  std::string name;
  std::size_t dim = 0;
  bool deterministic = true;

  friend bool operator==(const BackendDescriptor&, const BackendDescriptor&) = default;
};

struct TokenEmbeddings {
  std::vector<std::string> tokens;
  std::vector<EmbeddingVector> vectors;  // parallel to tokens
};

// Source of sentence- and token-level embeddings. Public calls validate
// inputs and outputs; implementations override the do_* hooks. Implementations
// must tolerate concurrent calls.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;

  virtual BackendDescriptor descriptor() const = 0;

  // One vector per text, in input order. Throws ArgumentError for an empty
  // list or a text that is blank after trimming.
  std::vector<EmbeddingVector> embed_sentences(std::span<const std::string> texts);
  EmbeddingVector embed_sentence(std::string_view text);

  // The backend's own tokenization of `text` with one vector per token.
  TokenEmbeddings embed_tokens(std::string_view text);

 protected:
  virtual std::vector<EmbeddingVector> do_embed_sentences(std::span<const std::string> texts) = 0;
  virtual TokenEmbeddings do_embed_tokens(std::string_view text) = 0;
};

// dot(u, v) / (|u| |v|) clamped to [-1, 1]. Exactly 1 for identical vectors.
// Throws ArgumentError on a dimension mismatch or an all-zero vector.
double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

// Deterministic offline backend: every normalized token maps to a pseudo-random
// vector in [-1, 1)^dim derived from (seed, token); a sentence is the mean of
// its token vectors. Text with no word characters is treated as one token.
class HashEmbeddingBackend final : public EmbeddingBackend {
 public:
  explicit HashEmbeddingBackend(std::uint64_t seed = 0, std::size_t dim = 32);

  BackendDescriptor descriptor() const override;
  EmbeddingVector token_vector(std::string_view token) const;

 protected:
  std::vector<EmbeddingVector> do_embed_sentences(std::span<const std::string> texts) override;
  TokenEmbeddings do_embed_tokens(std::string_view text) override;

 private:
  std::uint64_t seed_;
  std::size_t dim_;
};

// Per-run memo in front of another backend.
class CachingEmbeddingBackend final : public EmbeddingBackend {
 public:
  explicit CachingEmbeddingBackend(std::shared_ptr<EmbeddingBackend> inner);

  BackendDescriptor descriptor() const override { return inner_->descriptor(); }
  std::size_t cached_sentences() const;

 protected:
  std::vector<EmbeddingVector> do_embed_sentences(std::span<const std::string> texts) override;
  TokenEmbeddings do_embed_tokens(std::string_view text) override;

 private:
  std::shared_ptr<EmbeddingBackend> inner_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, EmbeddingVector> sentences_;
  std::unordered_map<std::string, TokenEmbeddings> tokens_;
};

}  // namespace tracklist
