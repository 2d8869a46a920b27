#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support/temp_dir.hpp"
#include "tracklist/error.hpp"
#include "tracklist/pipeline.hpp"
#include "tracklist/stats.hpp"

using namespace tracklist;
namespace fs = std::filesystem;

namespace {

const fs::path kMini = fs::path(TRACKLIST_SOURCE_DIR) / "data" / "mini";

RunConfig mini_config(const fs::path& out) {
  auto c = RunConfig::load(kMini / "config.json");
  c.output_dir = out;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, bool> ran(const Pipeline& p) {
  std::map<std::string, bool> m;
  for (const auto& s : p.steps()) m[s.step] = s.ran;
  return m;
}

}  // namespace

TEST(FirstSentence, Cuts) {
  EXPECT_EQ(first_sentence("A fever. Then more."), "A fever.");
  EXPECT_EQ(first_sentence("Dose 2.5 mg daily! Yes"), "Dose 2.5 mg daily!");
  EXPECT_EQ(first_sentence("no terminator"), "no terminator");
}

TEST(Pipeline, MiniFixtureEndToEnd) {
  tltest::TempDir dir;
  Pipeline p(mini_config(dir / "run"));
  EXPECT_EQ(p.run(), RunStatus::kOk);
  for (const char* f : {"index/index.bin", "index/summary.json", "answers/echo/answers.jsonl",
                        "answers/scripted/answers.jsonl", "scores/term_freqs.jsonl",
                        "scores/echo/bertscore.jsonl", "scores/scripted/ngrams.jsonl",
                        "scores/headtail_selection.json", "scores/headtail_selection.csv",
                        "scores/traces.jsonl", "correlations/quality_vs_frequency.json",
                        "correlations/similarity_vs_cooccurrence.json",
                        "correlations/scatter_scripted.csv", "report.csv", "report.json", "report.md",
                        "run_manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir / "run" / f)) << f;
  }
  const auto rep = p.report();
  EXPECT_EQ(rep.quality_vs_frequency.size(), 2u * 5 * 3);
  EXPECT_EQ(rep.similarity_vs_cooccurrence.size(), 2u * 3 * 3);
  EXPECT_EQ(rep.provenance.corpus_documents, 40u);
  EXPECT_EQ(rep.provenance.dataset_records, 25u);
  EXPECT_EQ(rep.provenance.config_hash, p.config().hash());
  for (const auto& c : rep.quality_vs_frequency) {
    if (c.n < 3) {
      EXPECT_FALSE(c.r.has_value());
      EXPECT_FALSE(c.note.empty());
    }
  }
  const auto manifest = nlohmann::json::parse(slurp(dir / "run" / "run_manifest.json"));
  EXPECT_TRUE(manifest.contains("started_at"));
  EXPECT_EQ(manifest.at("status"), "ok");
}

TEST(Pipeline, EchoAnswersEqualTerms) {
  tltest::TempDir dir;
  Pipeline p(mini_config(dir / "run"));
  p.step_generate();
  const auto answers = read_answers(dir / "run" / "answers" / "echo" / "answers.jsonl");
  std::map<std::string, std::string> term_of;
  for (const auto& r : p.records()) term_of[r.record_id] = r.term;
  ASSERT_EQ(answers.size(), 25u);
  for (const auto& a : answers) EXPECT_EQ(a.text, term_of.at(a.record_id));
}

TEST(Pipeline, IdempotentAndReused) {
  tltest::TempDir dir;
  Pipeline first(mini_config(dir / "run"));
  first.run();
  const auto before = slurp(dir / "run" / "report.json");
  Pipeline second(mini_config(dir / "run"));
  second.run();
  for (const auto& [step, r] : ran(second)) EXPECT_FALSE(r) << step;
  EXPECT_EQ(slurp(dir / "run" / "report.json"), before);

  Pipeline fresh(mini_config(dir / "other"));
  fresh.run();
  for (const char* f : {"report.json", "report.csv", "report.md"}) {
    EXPECT_EQ(slurp(dir / "other" / f), slurp(dir / "run" / f)) << f;
  }
}

TEST(Pipeline, DeletingStepFiveRecomputesOnlyStepFive) {
  tltest::TempDir dir;
  Pipeline(mini_config(dir / "run")).run();
  const auto before = slurp(dir / "run" / "report.json");
  fs::remove(dir / "run" / "correlations" / "similarity_vs_cooccurrence.json");
  fs::remove(dir / "run" / "scores" / "scripted" / "ngrams.jsonl");
  Pipeline again(mini_config(dir / "run"));
  again.run();
  const auto steps = ran(again);
  EXPECT_TRUE(steps.at("cooccurrence"));
  for (const char* s : {"index", "generate", "frequency", "score", "correlate"}) {
    EXPECT_FALSE(steps.at(s)) << s;
  }
  EXPECT_EQ(slurp(dir / "run" / "report.json"), before);
}

TEST(Pipeline, ChangedSettingReruns) {
  tltest::TempDir dir;
  Pipeline(mini_config(dir / "run")).run();
  auto c = mini_config(dir / "run");
  c.top_k = 2;
  Pipeline again(c);
  again.run();
  const auto steps = ran(again);
  EXPECT_TRUE(steps.at("cooccurrence"));
  EXPECT_FALSE(steps.at("score"));
}

TEST(Pipeline, PartialGenerationIsReportedAndResumable) {
  tltest::TempDir dir;
  auto c = mini_config(dir / "run");
  GenerationScript script;
  script.failures["mini-002"] = "timeout";
  PipelineBackends backends;
  backends.models["echo"] = std::make_shared<ScriptedGenerationBackend>("echo", script);
  Pipeline p(c, backends);
  EXPECT_EQ(p.run(), RunStatus::kPartial);
  EXPECT_TRUE(fs::exists(dir / "run" / "report.json"));
  EXPECT_EQ(read_answers(dir / "run" / "answers" / "echo" / "answers.jsonl").size(), 24u);

  auto healthy = std::make_shared<ScriptedGenerationBackend>("echo");
  PipelineBackends fixed;
  fixed.models["echo"] = healthy;
  Pipeline resumed(c, fixed);
  EXPECT_EQ(resumed.run(), RunStatus::kOk);
  EXPECT_EQ(healthy->called_ids(), std::vector<std::string>{"mini-002"});
}

TEST(Pipeline, StepFailureNamesStep) {
  tltest::TempDir dir;
  Pipeline(mini_config(dir / "run")).run();
  std::ofstream(dir / "run" / "scores" / "echo" / "bertscore.jsonl") << "{broken\n";
  Pipeline p(mini_config(dir / "run"));
  try {
    p.step_correlate();
    FAIL();
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.step(), "correlate");
  }
  EXPECT_TRUE(fs::exists(dir / "run" / "answers" / "echo" / "answers.jsonl"));
}

TEST(Pipeline, UnwritableOutputFailsBeforeWork) {
  tltest::TempDir dir;
  std::ofstream(dir / "blocker") << "x";
  auto c = mini_config(dir / "blocker" / "run");
  auto probe = std::make_shared<ScriptedGenerationBackend>("echo");
  PipelineBackends b;
  b.models["echo"] = probe;
  Pipeline p(c, b);
  EXPECT_THROW(p.run(), Error);
  EXPECT_EQ(probe->calls(), 0u);
}

TEST(Pipeline, InvalidConfigRejected) {
  tltest::TempDir dir;
  auto c = mini_config(dir / "run");
  c.ngram_max = 9;
  EXPECT_THROW(Pipeline(c).run(), ArgumentError);
  EXPECT_FALSE(fs::exists(dir / "run"));
}

TEST(Pipeline, TableFiveTracesToIntermediates) {
  tltest::TempDir dir;
  Pipeline p(mini_config(dir / "run"));
  p.run();
  // Recompute one cell from scores/<m>/ngrams.jsonl.
  std::vector<double> x, y;
  std::ifstream in(dir / "run" / "scores" / "scripted" / "ngrams.jsonl");
  for (std::string line; std::getline(in, line);) {
    const auto j = nlohmann::json::parse(line);
    x.push_back(j.at("similarity").get<double>());
    y.push_back(j.at("co_prob").get<double>());
  }
  const auto rep = p.report();
  for (const auto& c : rep.similarity_vs_cooccurrence) {
    if (c.model == "scripted" && c.criterion == "overall" && c.subcorpus == "full") {
      ASSERT_TRUE(c.r.has_value());
      EXPECT_EQ(c.n, x.size());
      EXPECT_NEAR(*c.r, pearson(x, y).r, 1e-15);
    }
  }
}
