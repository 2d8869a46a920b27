#include "tracklist/http_backends.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>

#include "tracklist/error.hpp"
#include "tracklist/text.hpp"

namespace tracklist {
namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host:port
  std::string path;
};

ParsedUrl parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.substr(0, scheme_end) != "http") {
    throw ArgumentError("only http:// endpoints are supported: '" + url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

bool is_timeout(httplib::Error e) {
  return e == httplib::Error::ConnectionTimeout || e == httplib::Error::Read ||
         e == httplib::Error::Write;
}

}  // namespace

nlohmann::json post_json(const HttpEndpoint& endpoint, const nlohmann::json& body) {
  const auto url = parse_url(endpoint.url);
  httplib::Client client(url.origin);
  const auto timeout = std::chrono::milliseconds(endpoint.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  const std::string payload = body.dump();
  const int max_attempts = 1 + std::max(0, endpoint.retries);
  std::string last_error;
  bool last_timeout = false;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    auto res = client.Post(url.path, payload, "application/json");
    if (res && res->status == 200) {
      try {
        return nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::parse_error& e) {
        throw TransportError("malformed JSON from " + endpoint.url + ": " + e.what(),
                             endpoint.url, attempt, false);
      }
    }
    if (res) {
      last_error = "HTTP " + std::to_string(res->status);
      last_timeout = false;
      // Client errors will not improve on retry.
      if (res->status >= 400 && res->status < 500 && res->status != 429) {
        throw TransportError(last_error + " from " + endpoint.url + ": " + res->body,
                             endpoint.url, attempt, false);
      }
    } else {
      last_error = httplib::to_string(res.error());
      last_timeout = is_timeout(res.error());
    }
    if (attempt < max_attempts) {
      std::this_thread::sleep_for(std::chrono::milliseconds(endpoint.backoff_ms << (attempt - 1)));
    }
  }
  const std::string what = "request to " + endpoint.url + " failed after " +
                           std::to_string(max_attempts) + " attempt(s): " + last_error;
  if (last_timeout) throw TimeoutError(what, endpoint.url, max_attempts, true);
  throw TransportError(what, endpoint.url, max_attempts, true);
}

HttpEmbeddingBackend::HttpEmbeddingBackend(HttpEndpoint endpoint, std::size_t batch_size,
                                           bool deterministic)
    : endpoint_(std::move(endpoint)), batch_size_(batch_size), deterministic_(deterministic) {
  if (batch_size_ == 0) throw ArgumentError("embedding batch_size must be >= 1");
  parse_url(endpoint_.url);
}

std::vector<EmbeddingVector> HttpEmbeddingBackend::request(
    std::span<const std::string> texts) const {
  const auto res = post_json(endpoint_, nlohmann::json{{"texts", texts}});
  if (!res.contains("vectors") || !res["vectors"].is_array()) {
    throw TransportError("embedding response lacks 'vectors'", endpoint_.url, 1, false);
  }
  const auto& arr = res["vectors"];
  if (arr.size() != texts.size()) {
    throw TransportError("embedding service returned " + std::to_string(arr.size()) +
                             " vectors for " + std::to_string(texts.size()) + " texts",
                         endpoint_.url, 1, false);
  }
  std::vector<EmbeddingVector> out;
  out.reserve(arr.size());
  for (const auto& v : arr) out.emplace_back(v.get<std::vector<double>>());
  {
    std::lock_guard lock(mu_);
    if (!descriptor_) {
      const std::size_t dim = res.value("dim", out.front().dim());
      descriptor_ = BackendDescriptor{res.value("name", std::string("http-embedding")), dim,
                                      deterministic_};
    }
    for (const auto& v : out) {
      if (v.dim() != descriptor_->dim) {
        throw TransportError("embedding service changed dimension mid-run", endpoint_.url, 1, false);
      }
    }
  }
  return out;
}

BackendDescriptor HttpEmbeddingBackend::descriptor() const {
  {
    std::lock_guard lock(mu_);
    if (descriptor_) return *descriptor_;
  }
  const std::string probe = "probe";
  request(std::span(&probe, 1));
  std::lock_guard lock(mu_);
  return *descriptor_;
}

std::vector<EmbeddingVector> HttpEmbeddingBackend::do_embed_sentences(
    std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); i += batch_size_) {
    auto part = request(texts.subspan(i, std::min(batch_size_, texts.size() - i)));
    for (auto& v : part) out.push_back(std::move(v));
  }
  return out;
}

TokenEmbeddings HttpEmbeddingBackend::do_embed_tokens(std::string_view text) {
  TokenEmbeddings out;
  out.tokens = normalize_text(text);
  if (out.tokens.empty()) out.tokens.emplace_back(trim(text));
  out.vectors = do_embed_sentences(out.tokens);
  return out;
}

HttpGenerationBackend::HttpGenerationBackend(std::string model_name, HttpEndpoint endpoint)
    : model_name_(std::move(model_name)), endpoint_(std::move(endpoint)) {
  parse_url(endpoint_.url);
}

std::string HttpGenerationBackend::complete(const GenerationRequest& request) {
  const auto res = post_json(endpoint_, {{"prompt", request.prompt},
                                         {"max_tokens", request.max_tokens},
                                         {"temperature", request.temperature}});
  if (!res.contains("text") || !res["text"].is_string()) {
    throw TransportError("completion response lacks string 'text'", endpoint_.url, 1, false);
  }
  return res["text"].get<std::string>();
}

}  // namespace tracklist
