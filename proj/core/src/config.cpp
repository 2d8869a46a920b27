#include "tracklist/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>

#include "tracklist/error.hpp"
#include "tracklist/text.hpp"

namespace tracklist {
namespace {

std::filesystem::path resolve(const nlohmann::json& j, const char* key,
                              const std::filesystem::path& base) {
  if (!j.contains(key) || j[key].is_null()) return {};
  std::filesystem::path p = j[key].get<std::string>();
  if (p.empty()) return {};
  if (p.is_relative()) p = base / p;
  return p.lexically_normal();
}

HttpEndpoint endpoint_from(const nlohmann::json& j) {
  HttpEndpoint e;
  e.url = j.value("endpoint", std::string());
  e.timeout_ms = j.value("timeout_ms", e.timeout_ms);
  e.retries = j.value("retries", e.retries);
  e.backoff_ms = j.value("backoff_ms", e.backoff_ms);
  return e;
}

nlohmann::json endpoint_json(const HttpEndpoint& e) {
  return {{"endpoint", e.url}, {"timeout_ms", e.timeout_ms}, {"retries", e.retries},
          {"backoff_ms", e.backoff_ms}};
}

bool safe_name(const std::string& s) {
  if (s.empty() || s == "." || s == "..") return false;
  for (unsigned char c : s) {
    if (!std::isalnum(c) && c != '-' && c != '_' && c != '.') return false;
  }
  return true;
}

std::string env_key(const std::string& name) {
  std::string out;
  for (unsigned char c : name) out.push_back(std::isalnum(c) ? static_cast<char>(std::toupper(c)) : '_');
  return out;
}

}  // namespace

std::string_view to_string(NgramMetric m) {
  return m == NgramMetric::kCosine ? "cosine" : "bertscore";
}

RunConfig RunConfig::from_json(const nlohmann::json& j, const std::filesystem::path& base) {
  if (!j.is_object()) throw FormatError("config must be a JSON object");
  RunConfig c;
  try {
    c.corpus = resolve(j, "corpus", base);
    c.index = resolve(j, "index", base);
    c.dataset = resolve(j, "dataset", base);
    c.prompts = resolve(j, "prompts", base);
    c.output_dir = resolve(j, "output_dir", base);

    if (j.contains("models")) {
      for (const auto& m : j["models"]) {
        ModelConfig mc;
        mc.name = m.at("name").get<std::string>();
        mc.kind = m.value("kind", mc.kind);
        mc.script = resolve(m, "script", base);
        mc.endpoint = endpoint_from(m);
        mc.max_tokens = m.value("max_tokens", mc.max_tokens);
        mc.temperature = m.value("temperature", mc.temperature);
        mc.concurrency = m.value("concurrency", mc.concurrency);
        c.models.push_back(std::move(mc));
      }
    }
    if (j.contains("embedding")) {
      const auto& e = j["embedding"];
      c.embedding.kind = e.value("kind", c.embedding.kind);
      c.embedding.dim = e.value("dim", c.embedding.dim);
      c.embedding.endpoint = endpoint_from(e);
      c.embedding.batch_size = e.value("batch_size", c.embedding.batch_size);
      c.embedding.deterministic = e.value("deterministic", c.embedding.deterministic);
    }
    if (j.contains("ngram")) {
      c.ngram_min = j["ngram"].value("min", c.ngram_min);
      c.ngram_max = j["ngram"].value("max", c.ngram_max);
    }
    c.top_k = j.value("top_k", c.top_k);
    const auto metric = j.value("ngram_selection_metric", std::string("cosine"));
    if (metric == "cosine") {
      c.selection_metric = NgramMetric::kCosine;
    } else if (metric == "bertscore") {
      c.selection_metric = NgramMetric::kBertScore;
    } else {
      throw FormatError("ngram_selection_metric must be 'cosine' or 'bertscore', got '" + metric + "'");
    }
    if (j.contains("quotas")) {
      const auto& q = j["quotas"];
      c.quotas.head_ex = q.value("head_ex", c.quotas.head_ex);
      c.quotas.head_gp = q.value("head_gp", c.quotas.head_gp);
      c.quotas.tail_ex = q.value("tail_ex", c.quotas.tail_ex);
      c.quotas.tail_gp = q.value("tail_gp", c.quotas.tail_gp);
    }
    c.trace_limit = j.value("trace_limit", c.trace_limit);
    c.truncate_first_sentence = j.value("truncate_first_sentence", c.truncate_first_sentence);
    c.emit_scatter = j.value("emit_scatter", c.emit_scatter);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return from_json(j, std::filesystem::absolute(path).parent_path());
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json models_json = nlohmann::json::array();
  for (const auto& m : models) {
    auto mj = endpoint_json(m.endpoint);
    mj["name"] = m.name;
    mj["kind"] = m.kind;
    mj["script"] = m.script.string();
    mj["max_tokens"] = m.max_tokens;
    mj["temperature"] = m.temperature;
    mj["concurrency"] = m.concurrency;
    models_json.push_back(std::move(mj));
  }
  auto emb = endpoint_json(embedding.endpoint);
  emb["kind"] = embedding.kind;
  emb["dim"] = embedding.dim;
  emb["batch_size"] = embedding.batch_size;
  emb["deterministic"] = embedding.deterministic;
  return {{"corpus", corpus.string()},
          {"index", index.string()},
          {"dataset", dataset.string()},
          {"prompts", prompts.string()},
          {"output_dir", output_dir.string()},
          {"models", models_json},
          {"embedding", emb},
          {"ngram", {{"min", ngram_min}, {"max", ngram_max}}},
          {"top_k", top_k},
          {"ngram_selection_metric", to_string(selection_metric)},
          {"quotas",
           {{"head_ex", quotas.head_ex},
            {"head_gp", quotas.head_gp},
            {"tail_ex", quotas.tail_ex},
            {"tail_gp", quotas.tail_gp}}},
          {"trace_limit", trace_limit},
          {"truncate_first_sentence", truncate_first_sentence},
          {"emit_scatter", emit_scatter},
          {"seed", seed},
          {"threads", threads}};
}

void RunConfig::validate() const {
  namespace fs = std::filesystem;
  if (dataset.empty()) throw ArgumentError("config: 'dataset' is required");
  if (!fs::exists(dataset)) throw ArgumentError("config: dataset not found: " + dataset.string());
  if (corpus.empty() && index.empty()) throw ArgumentError("config: set 'corpus' or 'index'");
  if (!corpus.empty() && !fs::exists(corpus)) {
    throw ArgumentError("config: corpus not found: " + corpus.string());
  }
  if (!index.empty() && !fs::exists(index)) {
    throw ArgumentError("config: index not found: " + index.string());
  }
  if (!prompts.empty() && !fs::exists(prompts)) {
    throw ArgumentError("config: prompt templates not found: " + prompts.string());
  }
  if (output_dir.empty()) throw ArgumentError("config: 'output_dir' is required");
  if (ngram_min < 1 || ngram_max > 8 || ngram_min > ngram_max) {
    throw ArgumentError("config: n-gram range must satisfy 1 <= min <= max <= 8");
  }
  if (top_k < 1) throw ArgumentError("config: top_k must be >= 1");
  if (trace_limit < 1) throw ArgumentError("config: trace_limit must be >= 1");
  if (models.empty()) throw ArgumentError("config: at least one model is required");
  std::set<std::string> names;
  for (const auto& m : models) {
    if (!safe_name(m.name)) {
      throw ArgumentError("config: model name '" + m.name + "' must be [A-Za-z0-9._-]+");
    }
    if (!names.insert(m.name).second) throw ArgumentError("config: duplicate model " + m.name);
    if (m.kind == "scripted") {
      if (m.script.empty() || !fs::exists(m.script)) {
        throw ArgumentError("config: model " + m.name + " needs an existing 'script' file");
      }
    } else if (m.kind == "http") {
      if (m.endpoint.url.empty()) throw ArgumentError("config: model " + m.name + " needs 'endpoint'");
    } else if (m.kind != "echo") {
      throw ArgumentError("config: model " + m.name + " has unknown kind '" + m.kind + "'");
    }
    if (m.max_tokens < 1) throw ArgumentError("config: max_tokens must be >= 1");
  }
  if (embedding.kind == "hash") {
    if (embedding.dim < 1) throw ArgumentError("config: embedding dim must be >= 1");
  } else if (embedding.kind == "http") {
    if (embedding.endpoint.url.empty()) throw ArgumentError("config: embedding needs 'endpoint'");
  } else {
    throw ArgumentError("config: unknown embedding kind '" + embedding.kind + "'");
  }
}

std::string RunConfig::hash() const {
  auto j = to_json();
  j.erase("output_dir");
  j.erase("threads");
  for (auto& m : j["models"]) m.erase("concurrency");
  return hex64(fnv1a64(j.dump()));
}

void apply_env_overrides(RunConfig& config) {
  if (const char* v = std::getenv("TRACKLIST_EMBEDDING_URL"); v && *v) {
    config.embedding.endpoint.url = v;
  }
  const char* all = std::getenv("TRACKLIST_GENERATION_URL");
  for (auto& m : config.models) {
    if (m.kind != "http") continue;
    if (all && *all) m.endpoint.url = all;
    const auto key = "TRACKLIST_GENERATION_URL_" + env_key(m.name);
    if (const char* v = std::getenv(key.c_str()); v && *v) m.endpoint.url = v;
  }
}

}  // namespace tracklist
