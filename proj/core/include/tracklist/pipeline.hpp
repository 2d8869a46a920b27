#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tracklist/config.hpp"
#include "tracklist/corpus_index.hpp"
#include "tracklist/embedding.hpp"
#include "tracklist/generation.hpp"
#include "tracklist/qa_harness.hpp"
#include "tracklist/report.hpp"

namespace tracklist {

// Backends injected in place of the ones the config describes; used by tests
// and by embedders of the library.
struct PipelineBackends {
  std::shared_ptr<EmbeddingBackend> embedding;
  std::map<std::string, std::shared_ptr<GenerationBackend>> models;
};

struct StepRecord {
  std::string step;
  bool ran = false;  // false: outputs were up to date and reused
};

std::shared_ptr<EmbeddingBackend> make_embedding_backend(const EmbeddingConfig& config,
                                                         std::uint64_t seed);
std::shared_ptr<GenerationBackend> make_generation_backend(const ModelConfig& config);

// Text up to and including the first '.', '!' or '?' that ends the string
// or is followed by whitespace.
std::string first_sentence(std::string_view text);

// Five-step run over an artifacts directory:
//
//   index/        index.bin, summary.json
//   answers/<m>/  answers.jsonl, errors.jsonl          step 1 (generate)
//   scores/       term_freqs.jsonl                      step 2 (frequency)
//   scores/<m>/   bertscore.jsonl                       step 3 (score)
//   correlations/ quality_vs_frequency.json, scatter_<m>.csv   step 4 (correlate)
//   scores/       headtail_selection.{json,csv}, traces.jsonl,
//   scores/<m>/   ngrams.jsonl,
//   correlations/ similarity_vs_cooccurrence.json       step 5 (cooccurrence)
//   report.{csv,json,md}, run_manifest.json
//
// Every step reads only persisted inputs and is skipped when its outputs
// exist and its input stamp is unchanged. Step failures throw PipelineError
// naming the step; artifacts already written stay in place.
class Pipeline {
 public:
  explicit Pipeline(RunConfig config, PipelineBackends backends = {});

  const RunConfig& config() const noexcept { return config_; }
  const std::filesystem::path& out() const noexcept { return config_.output_dir; }

  // Validates the config and checks the output directory is writable.
  void prepare();

  const DocFreqIndex& index();
  const std::vector<QARecord>& records();

  RunStatus step_generate();
  void step_frequency();
  void step_score();
  void step_correlate();
  void step_cooccurrence();

  // Assembles the report from persisted correlation files.
  CorrelationReport report();
  std::vector<std::filesystem::path> emit(const std::set<ReportFormat>& formats = {
                                              ReportFormat::kCsv, ReportFormat::kJson,
                                              ReportFormat::kMarkdown});

  // prepare + all five steps + report + manifest.
  RunStatus run();

  const std::vector<StepRecord>& steps() const noexcept { return steps_; }

 private:
  EmbeddingBackend& embedding();
  GenerationBackend& model_backend(const ModelConfig& m);
  const PromptTemplates& templates();
  std::string index_digest();
  bool up_to_date(const std::string& step, const std::string& hash,
                  const std::vector<std::filesystem::path>& outputs) const;
  void write_stamp(const std::string& step, const std::string& hash) const;
  void record(const std::string& step, bool ran);
  std::string answer_text(const GeneratedAnswer& a) const;

  RunConfig config_;
  PipelineBackends injected_;
  bool prepared_ = false;
  std::optional<DocFreqIndex> index_;
  std::optional<std::string> index_digest_;
  std::optional<std::vector<QARecord>> records_;
  std::optional<PromptTemplates> templates_;
  std::shared_ptr<EmbeddingBackend> embedding_;
  std::map<std::string, std::shared_ptr<GenerationBackend>> models_;
  std::vector<StepRecord> steps_;
};

// Convenience wrapper: Pipeline(config).run() and the resulting report.
struct PipelineResult {
  CorrelationReport report;
  RunStatus status = RunStatus::kOk;
  std::vector<StepRecord> steps;
};
PipelineResult run_pipeline(const RunConfig& config, PipelineBackends backends = {});

}  // namespace tracklist
