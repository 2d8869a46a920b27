#include "tracklist/generation.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <thread>
#include <unordered_set>

#include "tracklist/error.hpp"
#include "tracklist/log.hpp"
#include "tracklist/text.hpp"

namespace tracklist {

void to_json(nlohmann::json& j, const GeneratedAnswer& a) {
  j = nlohmann::json{{"record_id", a.record_id},
                     {"model_name", a.model_name},
                     {"prompt", a.prompt},
                     {"text", a.text},
                     {"latency_ms", a.latency_ms}};
}

void from_json(const nlohmann::json& j, GeneratedAnswer& a) {
  j.at("record_id").get_to(a.record_id);
  j.at("model_name").get_to(a.model_name);
  j.at("prompt").get_to(a.prompt);
  j.at("text").get_to(a.text);
  a.latency_ms = j.value("latency_ms", std::uint64_t{0});
}

ScriptedGenerationBackend::ScriptedGenerationBackend(std::string name, Script script)
    : name_(std::move(name)), script_(std::move(script)) {}

ScriptedGenerationBackend::Script ScriptedGenerationBackend::load_script(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scripted answers: " + path.string());
  Script s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto id = j.at("record_id").get<std::string>();
      if (j.contains("error")) {
        s.failures[id] = j["error"].get<std::string>();
      } else {
        s.answers[id] = j.at("text").get<std::string>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path.string() + ": " + e.what(), lineno);
    }
  }
  return s;
}

std::string ScriptedGenerationBackend::complete(const GenerationRequest& request) {
  ++calls_;
  {
    std::lock_guard lock(mu_);
    called_.push_back(request.record_id);
  }
  if (auto it = script_.failures.find(request.record_id); it != script_.failures.end()) {
    if (it->second == "timeout") {
      throw TimeoutError("scripted timeout for " + request.record_id, "scripted://" + name_, 1, true);
    }
    throw TransportError("scripted failure for " + request.record_id, "scripted://" + name_, 1, false);
  }
  if (auto it = script_.answers.find(request.record_id); it != script_.answers.end()) {
    return it->second;
  }
  if (script_.echo_term) return request.term;
  throw TransportError("no scripted answer for " + request.record_id, "scripted://" + name_, 1, false);
}

std::vector<std::string> ScriptedGenerationBackend::called_ids() const {
  std::lock_guard lock(mu_);
  return called_;
}

AnswerStore::AnswerStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::vector<GeneratedAnswer> read_answers(const std::filesystem::path& path) {
  std::vector<GeneratedAnswer> out;
  std::ifstream in(path);
  if (!in) return out;
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!trim(line).empty()) lines.push_back(std::move(line));
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      out.push_back(nlohmann::json::parse(lines[i]).get<GeneratedAnswer>());
    } catch (const nlohmann::json::exception& e) {
      if (i + 1 == lines.size()) {
        log::warn("ignoring truncated last line of " + path.string());
        break;
      }
      throw FormatError(path.string() + ": " + e.what(), i + 1);
    }
  }
  return out;
}

std::map<std::string, GeneratedAnswer> AnswerStore::load() const {
  std::map<std::string, GeneratedAnswer> out;
  for (auto& a : read_answers(answers_path())) out[a.record_id] = std::move(a);
  return out;
}

void AnswerStore::append(const GeneratedAnswer& answer) {
  std::lock_guard lock(mu_);
  std::ofstream out(answers_path(), std::ios::app);
  if (!out) throw Error("cannot append to " + answers_path().string());
  out << nlohmann::json(answer).dump() << '\n';
  out.flush();
  if (!out) throw Error("failed writing " + answers_path().string());
}

void AnswerStore::write_errors(std::span<const GenerationFailure> errors) const {
  std::ofstream out(errors_path(), std::ios::trunc);
  if (!out) throw Error("cannot write " + errors_path().string());
  for (const auto& e : errors) {
    out << nlohmann::json{{"record_id", e.record_id}, {"kind", e.kind}, {"error", e.message}}.dump()
        << '\n';
  }
}

void AnswerStore::compact(std::span<const GeneratedAnswer> answers) const {
  std::vector<const GeneratedAnswer*> sorted;
  for (const auto& a : answers) sorted.push_back(&a);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->record_id < b->record_id; });
  const auto tmp = dir_ / "answers.jsonl.tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    for (const auto* a : sorted) out << nlohmann::json(*a).dump() << '\n';
    out.flush();
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, answers_path());
}

GenerationResult generate(GenerationBackend& backend, std::span<const GenerationItem> items,
                          const GenerationOptions& options, AnswerStore* store) {
  if (items.empty()) throw ArgumentError("generate: no prompts");
  {
    std::unordered_set<std::string_view> ids;
    for (const auto& it : items) {
      if (!ids.insert(it.record_id).second) {
        throw ArgumentError("generate: duplicate record_id " + it.record_id);
      }
    }
  }

  std::map<std::string, GeneratedAnswer> previous;
  if (store) previous = store->load();

  const std::string model = backend.name();
  std::vector<std::optional<GeneratedAnswer>> answers(items.size());
  std::vector<std::optional<GenerationFailure>> failures(items.size());
  std::vector<std::size_t> pending;
  GenerationResult result;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto it = previous.find(items[i].record_id);
    if (it != previous.end() && it->second.model_name == model) {
      answers[i] = it->second;
      ++result.reused;
    } else {
      pending.push_back(i);
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < pending.size(); k = next++) {
      const auto& item = items[pending[k]];
      GenerationRequest req{item.record_id, item.term, item.prompt, options.max_tokens,
                            options.temperature};
      const auto t0 = std::chrono::steady_clock::now();
      try {
        auto text = backend.complete(req);
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        GeneratedAnswer a{item.record_id, model, item.prompt, std::move(text),
                          static_cast<std::uint64_t>(ms)};
        if (store) store->append(a);
        answers[pending[k]] = std::move(a);
      } catch (const TimeoutError& e) {
        failures[pending[k]] = GenerationFailure{item.record_id, "timeout", e.what()};
      } catch (const TransportError& e) {
        failures[pending[k]] = GenerationFailure{item.record_id, "transport", e.what()};
      } catch (const std::exception& e) {
        failures[pending[k]] = GenerationFailure{item.record_id, "error", e.what()};
      }
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, options.concurrency), pending.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  result.backend_calls = pending.size();

  for (std::size_t i = 0; i < items.size(); ++i) {
    if (answers[i]) result.answers.push_back(std::move(*answers[i]));
    if (failures[i]) result.errors.push_back(std::move(*failures[i]));
  }
  if (store) {
    store->write_errors(result.errors);
    // Keep answers from earlier runs for records outside this batch.
    std::vector<GeneratedAnswer> all = result.answers;
    std::unordered_set<std::string_view> here;
    for (const auto& a : result.answers) here.insert(a.record_id);
    for (const auto& [id, a] : previous) {
      if (!here.contains(id)) all.push_back(a);
    }
    store->compact(all);
  }
  if (!result.errors.empty() && result.answers.empty()) {
    throw Error("generation failed for all " + std::to_string(pending.size()) +
                " attempted records (model " + model + "); see errors.jsonl");
  }
  return result;
}

}  // namespace tracklist
