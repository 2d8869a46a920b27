#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tracklist/headtail.hpp"
#include "tracklist/http_backends.hpp"
#include "tracklist/similarity.hpp"

namespace tracklist {

struct EmbeddingConfig {
  std::string kind = "hash";  // hash | http
  std::size_t dim = 32;       // hash only
  HttpEndpoint endpoint;      // http only
  std::size_t batch_size = 64;
  bool deterministic = true;
};

struct ModelConfig {
  std::string name;
  std::string kind = "echo";     // echo | scripted | http
  std::filesystem::path script;  // scripted only
  HttpEndpoint endpoint;         // http only
  int max_tokens = 64;
  double temperature = 0.0;
  unsigned concurrency = 1;
};

// Everything a run depends on. Relative paths in a config file resolve
// against the file's directory.
struct RunConfig {
  std::filesystem::path corpus;  // JSONL file or directory; optional when `index` is set
  std::filesystem::path index;   // prebuilt index file; optional
  std::filesystem::path dataset;
  std::filesystem::path prompts;  // optional; compiled-in defaults otherwise
  std::filesystem::path output_dir;

  std::vector<ModelConfig> models;
  EmbeddingConfig embedding;

  std::size_t ngram_min = 2;
  std::size_t ngram_max = 5;
  std::size_t top_k = 3;
  NgramMetric selection_metric = NgramMetric::kCosine;
  SelectionQuotas quotas;
  std::size_t trace_limit = 100;
  bool truncate_first_sentence = false;
  bool emit_scatter = true;
  std::uint64_t seed = 0;  // seeds the offline test backends only
  unsigned threads = 1;

  static RunConfig load(const std::filesystem::path& path);
  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  nlohmann::json to_json() const;

  // Throws ArgumentError describing the first problem found.
  void validate() const;

  // Hash of every setting that can change a reported number. Output location
  // and parallelism are excluded.
  std::string hash() const;
};

// TRACKLIST_EMBEDDING_URL replaces the embedding endpoint; TRACKLIST_GENERATION_URL
// the endpoint of every http model; TRACKLIST_GENERATION_URL_<NAME> (name
// upper-cased, non-alphanumerics as '_') one model's endpoint.
void apply_env_overrides(RunConfig& config);

std::string_view to_string(NgramMetric m);

}  // namespace tracklist
