#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "tracklist/embedding.hpp"
#include "tracklist/generation.hpp"

namespace tracklist {

struct HttpEndpoint {
  std::string url;  // http://host:port/path
  int timeout_ms = 30000;
  int retries = 2;  // extra attempts after the first
  int backoff_ms = 200;
};

// Client for an embedding service speaking
//   POST {"texts": [...]}  ->  {"vectors": [[...], ...], "dim": N, "name": "..."}
// Batches larger than batch_size are split. Token embeddings are obtained by
// embedding each normalized token as its own text.
class HttpEmbeddingBackend final : public EmbeddingBackend {
 public:
  explicit HttpEmbeddingBackend(HttpEndpoint endpoint, std::size_t batch_size = 64,
                                bool deterministic = true);

  // Issues a one-text probe request the first time the descriptor is unknown.
  BackendDescriptor descriptor() const override;

 protected:
  std::vector<EmbeddingVector> do_embed_sentences(std::span<const std::string> texts) override;
  TokenEmbeddings do_embed_tokens(std::string_view text) override;

 private:
  std::vector<EmbeddingVector> request(std::span<const std::string> texts) const;

  HttpEndpoint endpoint_;
  std::size_t batch_size_;
  bool deterministic_;
  mutable std::mutex mu_;
  mutable std::optional<BackendDescriptor> descriptor_;
};

// Client for a completion service speaking
//   POST {"prompt": ..., "max_tokens": N, "temperature": T}  ->  {"text": ...}
class HttpGenerationBackend final : public GenerationBackend {
 public:
  HttpGenerationBackend(std::string model_name, HttpEndpoint endpoint);

  std::string name() const override { return model_name_; }
  std::string complete(const GenerationRequest& request) override;

 private:
  std::string model_name_;
  HttpEndpoint endpoint_;
};

// POSTs a JSON body with retries; returns the parsed JSON response. Throws
// TimeoutError / TransportError carrying the endpoint and attempt count.
nlohmann::json post_json(const HttpEndpoint& endpoint, const nlohmann::json& body);

}  // namespace tracklist
