#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tracklist/embedding.hpp"

namespace tracklist {

inline constexpr const char* kSubcorpusLabels[] = {"EX", "GP", "full"};
inline constexpr const char* kHeadTailLabels[] = {"head", "tail", "overall"};

// One correlation cell. r and p_value are absent when the sample does not
// define them (n < 3 or a constant series); `note` says why.
struct CorrelationCell {
  std::string model;
  std::string criterion;  // query type, or head/tail/overall
  std::string subcorpus;  // EX, GP or full
  std::size_t n = 0;
  std::size_t excluded = 0;    // samples dropped for zero document frequency
  std::size_t degenerate = 0;  // empty answers scored as 0
  std::optional<double> r;
  std::optional<double> p_value;
  std::string note;

  bool significant(double alpha = 0.05) const { return p_value && *p_value < alpha; }
  friend bool operator==(const CorrelationCell&, const CorrelationCell&) = default;
};

struct ModelProvenance {
  std::string name;
  std::string kind;
  int max_tokens = 0;
  double temperature = 0.0;
  friend bool operator==(const ModelProvenance&, const ModelProvenance&) = default;
};

struct Provenance {
  std::string config_hash;
  std::string normalization;
  std::uint64_t corpus_documents = 0;
  std::size_t dataset_records = 0;
  BackendDescriptor embedding;
  std::vector<ModelProvenance> models;
  std::string answer_metric;
  std::string ngram_selection_metric;
  std::size_t ngram_min = 0;
  std::size_t ngram_max = 0;
  std::size_t top_k = 0;
  std::uint64_t seed = 0;
  std::string manifest = "run_manifest.json";  // holds timestamps
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// Answer quality against log10 document frequency, per query type x
// subcorpus x model; and top-k n-gram similarity against co-occurrence
// probability, per head/tail/overall x subcorpus x model.
struct CorrelationReport {
  std::vector<CorrelationCell> quality_vs_frequency;
  std::vector<CorrelationCell> similarity_vs_cooccurrence;
  Provenance provenance;
  friend bool operator==(const CorrelationReport&, const CorrelationReport&) = default;
};

nlohmann::json to_json(const CorrelationCell& c);
CorrelationCell cell_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CorrelationReport& r);
CorrelationReport report_from_json(const nlohmann::json& j);

// Header plus one line per cell of both tables.
std::string report_csv(const CorrelationReport& r);
// Query types as columns in DEF EX DEN PARA EXP order; subcorpora as rows.
std::string report_markdown(const CorrelationReport& r);

enum class ReportFormat { kCsv, kJson, kMarkdown };

// Writes report.{csv,json,md} into `dir`. Throws Error when the directory
// cannot be written.
std::vector<std::filesystem::path> emit_report(const CorrelationReport& r,
                                               const std::filesystem::path& dir,
                                               const std::set<ReportFormat>& formats = {
                                                   ReportFormat::kCsv, ReportFormat::kJson,
                                                   ReportFormat::kMarkdown});

// Creates `dir` if needed and proves it is writable with a probe file.
void ensure_writable_dir(const std::filesystem::path& dir);

// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

}  // namespace tracklist
