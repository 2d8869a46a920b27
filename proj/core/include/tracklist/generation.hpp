#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tracklist {

struct GenerationRequest {
  std::string record_id;
  std::string term;  // for scripted doubles; remote backends only see the prompt
  std::string prompt;
  int max_tokens = 64;
  double temperature = 0.0;
};

struct GeneratedAnswer {
  std::string record_id;
  std::string model_name;
  std::string prompt;
  std::string text;  // may be empty: a degenerate answer, never dropped
  std::uint64_t latency_ms = 0;

  friend bool operator==(const GeneratedAnswer&, const GeneratedAnswer&) = default;
};

void to_json(nlohmann::json& j, const GeneratedAnswer& a);
void from_json(const nlohmann::json& j, GeneratedAnswer& a);

// Text-completion service. complete() may throw TransportError/TimeoutError;
// implementations must tolerate concurrent calls.
class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;
  virtual std::string name() const = 0;
  virtual std::string complete(const GenerationRequest& request) = 0;
};

// Script for the deterministic test double. Answers come from a
// record_id -> text map; unscripted records echo the term (or fail, when echo
// is off). Records listed in `failures` throw the named error kind ("timeout"
// or "transport").
struct GenerationScript {
  std::map<std::string, std::string> answers;
  std::map<std::string, std::string> failures;
  bool echo_term = true;
};

class ScriptedGenerationBackend final : public GenerationBackend {
 public:
  using Script = GenerationScript;

  explicit ScriptedGenerationBackend(std::string name, Script script = {});

  // JSONL lines: {"record_id": ..., "text": ...} or {"record_id": ..., "error": "timeout"}.
  static Script load_script(const std::filesystem::path& path);

  std::string name() const override { return name_; }
  std::string complete(const GenerationRequest& request) override;

  std::size_t calls() const noexcept { return calls_.load(); }
  std::vector<std::string> called_ids() const;

 private:
  std::string name_;
  Script script_;
  std::atomic<std::size_t> calls_{0};
  mutable std::mutex mu_;
  std::vector<std::string> called_;
};

struct GenerationItem {
  std::string record_id;
  std::string term;
  std::string prompt;
};

struct GenerationOptions {
  int max_tokens = 64;
  double temperature = 0.0;
  unsigned concurrency = 1;
};

struct GenerationFailure {
  std::string record_id;
  std::string kind;  // timeout | transport | error
  std::string message;
};

enum class RunStatus { kOk, kPartial };

struct GenerationResult {
  std::vector<GeneratedAnswer> answers;   // input order, successful records only
  std::vector<GenerationFailure> errors;  // input order
  std::size_t backend_calls = 0;
  std::size_t reused = 0;  // answers taken from a previous run

  RunStatus status() const noexcept { return errors.empty() ? RunStatus::kOk : RunStatus::kPartial; }
};

// Crash-safe answer persistence in a run directory: answers.jsonl is appended
// and flushed per answer; errors.jsonl is rewritten at the end of each run.
class AnswerStore {
 public:
  explicit AnswerStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path answers_path() const { return dir_ / "answers.jsonl"; }
  std::filesystem::path errors_path() const { return dir_ / "errors.jsonl"; }

  // Answers persisted by earlier runs keyed by record_id. A truncated final
  // line (interrupted write) is ignored.
  std::map<std::string, GeneratedAnswer> load() const;

  void append(const GeneratedAnswer& answer);
  void write_errors(std::span<const GenerationFailure> errors) const;
  // Rewrites answers.jsonl atomically, sorted by record_id.
  void compact(std::span<const GeneratedAnswer> answers) const;

 private:
  std::filesystem::path dir_;
  std::mutex mu_;
};

std::vector<GeneratedAnswer> read_answers(const std::filesystem::path& path);

// Runs every item not already in `store` through the backend with bounded
// parallelism. Per-record failures are collected; if no record ends up with
// an answer, throws Error after persisting errors.jsonl.
GenerationResult generate(GenerationBackend& backend, std::span<const GenerationItem> items,
                          const GenerationOptions& options, AnswerStore* store = nullptr);

}  // namespace tracklist
