#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tracklist/corpus_index.hpp"
#include "tracklist/error.hpp"
#include "tracklist/headtail.hpp"
#include "tracklist/log.hpp"
#include "tracklist/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tracklist;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string corpus;
  std::string dataset;
  unsigned threads = 0;
  bool verbose = false;
};

RunConfig load_config(const Globals& g) {
  if (g.config.empty()) throw ArgumentError("--config is required for this command");
  auto c = RunConfig::load(g.config);
  if (g.seed) c.seed = *g.seed;
  if (!g.out.empty()) c.output_dir = g.out;
  if (!g.corpus.empty()) c.corpus = g.corpus;
  if (!g.dataset.empty()) c.dataset = g.dataset;
  if (g.threads) c.threads = g.threads;
  apply_env_overrides(c);
  return c;
}

std::set<ReportFormat> parse_formats(const std::vector<std::string>& names) {
  std::set<ReportFormat> out;
  for (const auto& n : names) {
    if (n == "csv") out.insert(ReportFormat::kCsv);
    else if (n == "json") out.insert(ReportFormat::kJson);
    else if (n == "md" || n == "markdown") out.insert(ReportFormat::kMarkdown);
    else throw ArgumentError("unknown report format '" + n + "'");
  }
  return out;
}

int status_code(RunStatus s) { return s == RunStatus::kOk ? kExitOk : kExitPartial; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corpus frequency and answer quality analysis"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "Run config (JSON)");
  app.add_option("--seed", g.seed, "Seed for the offline test backends");
  app.add_option("--out", g.out, "Override the output directory");
  app.add_option("--corpus", g.corpus, "Override the corpus path");
  app.add_option("--dataset", g.dataset, "Override the dataset path");
  app.add_option("--threads", g.threads, "Worker threads for indexing");
  app.add_flag("-v,--verbose", g.verbose, "Log progress to stderr");

  auto* index_cmd = app.add_subcommand("index", "Build or query a document-frequency index");
  index_cmd->require_subcommand(1);
  auto* build_cmd = index_cmd->add_subcommand("build", "Build an index");
  std::string build_output;
  build_cmd->add_option("-o,--output", build_output, "Index file (default <out>/index/index.bin)");

  auto* query_cmd = index_cmd->add_subcommand("query", "Query document frequencies");
  std::string index_path;
  std::string phrase;
  std::string with;
  std::size_t docs = 0;
  query_cmd->add_option("--index", index_path, "Index file (default from config)");
  query_cmd->add_option("phrase", phrase, "Phrase to look up")->required();
  query_cmd->add_option("--with", with, "Second phrase for co-document frequency");
  query_cmd->add_option("--docs", docs, "List up to N containing documents");

  auto* qa_cmd = app.add_subcommand("qa", "Question answering harness");
  qa_cmd->require_subcommand(1);
  qa_cmd->add_subcommand("run", "Generate answers for every record and model");

  app.add_subcommand("score", "Document frequencies and answer scores");
  app.add_subcommand("correlate", "Answer quality against log document frequency");

  auto* ht_cmd = app.add_subcommand("headtail", "Head/tail term analysis");
  ht_cmd->require_subcommand(1);
  ht_cmd->add_subcommand("select", "Select head/tail terms and correlate n-gram similarity");
  auto* trace_cmd = ht_cmd->add_subcommand("trace", "List documents containing a term");
  std::string trace_term_text;
  std::size_t trace_limit = 0;
  std::string trace_index;
  trace_cmd->add_option("term", trace_term_text, "Term to trace")->required();
  trace_cmd->add_option("--limit", trace_limit, "Maximum documents (default from config)");
  trace_cmd->add_option("--index", trace_index, "Index file (default from config)");

  auto* report_cmd = app.add_subcommand("report", "Write report files from correlations");
  std::vector<std::string> formats{"csv", "json", "md"};
  report_cmd->add_option("--format", formats, "csv, json, md")->delimiter(',');

  app.add_subcommand("run", "All steps end to end");

  CLI11_PARSE(app, argc, argv);
  if (g.verbose) log::set_min_level(log::Level::kInfo);

  try {
    if (index_cmd->parsed()) {
      if (build_cmd->parsed()) {
        if (!build_output.empty() && g.config.empty()) {
          if (g.corpus.empty()) throw ArgumentError("index build needs --config or --corpus");
          const auto idx = build_index_from_path(g.corpus, g.threads ? g.threads : 1);
          idx.save(build_output);
          std::cout << "documents " << idx.doc_count() << "\nvocabulary " << idx.vocabulary_size()
                    << "\n";
          return kExitOk;
        }
        Pipeline p(load_config(g));
        const auto& idx = p.index();
        if (!build_output.empty()) idx.save(build_output);
        std::cout << "documents " << idx.doc_count() << "\nvocabulary " << idx.vocabulary_size()
                  << "\n";
        return kExitOk;
      }
      std::optional<DocFreqIndex> loaded;
      std::optional<Pipeline> p;
      const DocFreqIndex* idx = nullptr;
      if (!index_path.empty()) {
        loaded = DocFreqIndex::load(index_path);
        idx = &*loaded;
      } else {
        p.emplace(load_config(g));
        idx = &p->index();
      }
      const auto a = Phrase::from_text(phrase);
      json out = {{"phrase", a.text()}, {"doc_freq", idx->doc_freq(a)}};
      if (!with.empty()) {
        const auto b = Phrase::from_text(with);
        out["with"] = b.text();
        out["co_doc_freq"] = idx->co_doc_freq(a, b);
      }
      if (docs) out["documents"] = idx->containing_docs(a, docs);
      std::cout << out.dump(2) << "\n";
      return kExitOk;
    }

    if (trace_cmd->parsed()) {
      std::optional<DocFreqIndex> loaded;
      std::optional<Pipeline> p;
      const DocFreqIndex* idx = nullptr;
      std::size_t limit = trace_limit;
      if (!trace_index.empty()) {
        loaded = DocFreqIndex::load(trace_index);
        idx = &*loaded;
        if (!limit) limit = 100;
      } else {
        p.emplace(load_config(g));
        idx = &p->index();
        if (!limit) limit = p->config().trace_limit;
      }
      const auto tr = trace_term(*idx, Phrase::from_text(trace_term_text), limit);
      if (tr.notice) std::cerr << *tr.notice << "\n";
      std::cout << "doc_id,count\n";
      for (const auto& r : tr.rows) std::cout << r.doc_id << ',' << r.count << "\n";
      return kExitOk;
    }

    Pipeline p(load_config(g));
    p.prepare();
    const auto name = app.get_subcommands().front()->get_name();
    if (name == "qa") return status_code(p.step_generate());
    if (name == "score") {
      p.step_frequency();
      p.step_score();
    } else if (name == "correlate") {
      p.step_correlate();
    } else if (name == "headtail") {
      p.step_cooccurrence();
    } else if (name == "report") {
      for (const auto& f : p.emit(parse_formats(formats))) std::cout << f.string() << "\n";
    } else if (name == "run") {
      const auto status = p.run();
      for (const auto& s : p.steps()) {
        std::cout << s.step << ' ' << (s.ran ? "ran" : "reused") << "\n";
      }
      return status_code(status);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "tracklist: " << e.what() << "\n";
    return kExitFatal;
  }
}
