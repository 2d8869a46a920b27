#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "support/oracles.hpp"
#include "support/temp_dir.hpp"
#include "tracklist/corpus_index.hpp"
#include "tracklist/error.hpp"

using namespace tracklist;

namespace {

Phrase P(std::string_view s) { return Phrase::from_text(s); }

DocFreqIndex toy(std::vector<DocumentRecord> docs) { return build_index(docs); }

}  // namespace

TEST(DocFreq, SpecExamples) {
  const auto idx = toy({{"d1", "a b"}, {"d2", "b c"}});
  EXPECT_EQ(idx.doc_count(), 2u);
  EXPECT_EQ(idx.doc_freq(P("b")), 2u);
  EXPECT_EQ(idx.doc_freq(P("zzz")), 0u);

  EXPECT_EQ(toy({{"d1", "x y x y"}}).doc_freq(P("x y")), 1u);

  const auto idx3 = toy({{"d1", "a b c"}, {"d2", "a x"}});
  EXPECT_EQ(idx3.co_doc_freq(P("a"), P("b c")), 1u);
  EXPECT_EQ(idx3.co_doc_freq(P("a"), P("a")), idx3.doc_freq(P("a")));
  EXPECT_EQ(idx3.co_doc_freq(P("b"), P("x")), 0u);
}

TEST(DocFreq, EmptyCorpus) {
  const auto idx = toy({});
  EXPECT_EQ(idx.doc_count(), 0u);
  EXPECT_EQ(idx.doc_freq(P("anything")), 0u);
  EXPECT_TRUE(idx.containing_docs(P("anything"), 10).empty());
}

TEST(DocFreq, EmptyDocumentContributesNothing) {
  const auto idx = toy({{"e", ""}, {"f", "fever"}});
  EXPECT_EQ(idx.doc_count(), 2u);
  EXPECT_EQ(idx.doc_freq(P("fever")), 1u);
}

TEST(DocFreq, MatchesAcrossPunctuationAndCase) {
  const auto idx = toy({{"d1", "High BLOOD-pressure, again."}, {"d2", "blood. Pressure"}});
  EXPECT_EQ(idx.doc_freq(P("blood pressure")), 2u);
  EXPECT_EQ(idx.doc_freq(P("high blood pressure again")), 1u);
  EXPECT_EQ(idx.doc_freq(P("pressure blood")), 0u);
}

TEST(ContainingDocs, OrderAndLimit) {
  const auto idx = toy({{"e", "x"}, {"b", "x"}, {"d", "x"}, {"a", "x"}, {"c", "x"}, {"f", "y"}});
  EXPECT_EQ(idx.containing_docs(P("x"), 3), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(idx.containing_docs(P("x"), 100).size(), 5u);
  EXPECT_EQ(idx.containing_docs(P("y"), 100), std::vector<std::string>{"f"});
  EXPECT_TRUE(idx.containing_docs(P("q"), 100).empty());
  EXPECT_THROW(idx.containing_docs(P("x"), 0), ArgumentError);
}

TEST(Hits, CountsOverlappingOccurrences) {
  const auto idx = toy({{"d1", "x x y"}, {"d2", "a a a"}});
  const auto h = idx.hits(P("x"));
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h[0].count, 2u);
  EXPECT_EQ(idx.hits(P("a a"))[0].count, 2u);
}

TEST(Build, DuplicateIdNamesIt) {
  try {
    toy({{"dup", "a"}, {"other", "b"}, {"dup", "c"}});
    FAIL() << "expected BuildError";
  } catch (const BuildError& e) {
    EXPECT_NE(std::string(e.what()).find("dup"), std::string::npos);
  }
  EXPECT_THROW(toy({{"", "a"}}), BuildError);
}

TEST(Build, ParallelMatchesSerialBytes) {
  std::mt19937_64 rng(11);
  const auto corpus = tltest::random_corpus(rng, 50, 200);
  std::ostringstream a, b;
  build_index(corpus.docs, 1).write(a);
  build_index(corpus.docs, 4).write(b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Build, InsertionOrderDoesNotChangeBytes) {
  std::mt19937_64 rng(5);
  auto corpus = tltest::random_corpus(rng, 40, 50);
  std::ostringstream a, b;
  build_index(corpus.docs).write(a);
  std::reverse(corpus.docs.begin(), corpus.docs.end());
  build_index(corpus.docs).write(b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Persistence, RoundTripAndHeader) {
  tltest::TempDir dir;
  std::mt19937_64 rng(7);
  const auto corpus = tltest::random_corpus(rng, 30, 100);
  const auto idx = build_index(corpus.docs);
  idx.save(dir / "i.bin");
  const auto loaded = DocFreqIndex::load(dir / "i.bin");
  EXPECT_EQ(loaded.doc_count(), idx.doc_count());
  EXPECT_EQ(loaded.normalization(), std::string(kNormalizationVersion));
  std::ostringstream a, b;
  idx.write(a);
  loaded.write(b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, 7), "TLDFIDX");

  const tltest::BruteCorpus oracle(corpus.docs);
  for (int k = 0; k < 50; ++k) {
    const auto p = tltest::phrase_from(rng, oracle);
    if (p.empty()) continue;
    EXPECT_EQ(loaded.doc_freq(Phrase(p)), oracle.doc_freq(p));
  }
}

TEST(Persistence, RejectsCorruptFiles) {
  std::istringstream bad_magic("NOTANIDX........");
  EXPECT_THROW(DocFreqIndex::read(bad_magic), FormatError);

  std::ostringstream good;
  toy({{"a", "x y"}}).write(good);
  auto bytes = good.str();
  std::istringstream truncated(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(DocFreqIndex::read(truncated), FormatError);

  auto wrong_version = bytes;
  wrong_version[8] = 9;
  std::istringstream wv(wrong_version);
  EXPECT_THROW(DocFreqIndex::read(wv), FormatError);
}

TEST(Copy, CopiedIndexAnswersQueries) {
  const auto idx = toy({{"d1", "heart attack"}, {"d2", "heart"}});
  DocFreqIndex copy = idx;
  EXPECT_EQ(copy.doc_freq(P("heart")), 2u);
  DocFreqIndex assigned;
  assigned = copy;
  EXPECT_EQ(assigned.doc_freq(P("heart attack")), 1u);
}

TEST(OracleEquivalence, RandomCorpora) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const auto corpus = tltest::random_corpus(rng, 20, 60);
    const auto idx = build_index(corpus.docs);
    const tltest::BruteCorpus oracle(corpus.docs);
    ASSERT_EQ(idx.doc_count(), corpus.docs.size());
    for (int q = 0; q < 30; ++q) {
      auto a = q % 2 ? tltest::phrase_from(rng, oracle) : tltest::random_phrase(rng, corpus.vocabulary);
      auto b = tltest::random_phrase(rng, corpus.vocabulary, 3);
      if (a.empty()) a = b;
      const Phrase pa(a), pb(b);
      const auto df_a = idx.doc_freq(pa);
      const auto df_b = idx.doc_freq(pb);
      const auto co = idx.co_doc_freq(pa, pb);
      EXPECT_EQ(df_a, oracle.doc_freq(a));
      EXPECT_EQ(co, oracle.co_doc_freq(a, b));
      EXPECT_EQ(co, idx.co_doc_freq(pb, pa));
      EXPECT_LE(co, std::min(df_a, df_b));
      EXPECT_LE(df_a, idx.doc_count());
      const auto docs = idx.containing_docs(pa, 5);
      auto expected = oracle.containing(a);
      expected.resize(std::min<std::size_t>(expected.size(), 5));
      EXPECT_EQ(docs, expected);
    }
  }
}

TEST(Monotonicity, AddingADocumentBumpsOnlyItsPhrases) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    auto corpus = tltest::random_corpus(rng, 15, 40);
    const auto before = build_index(corpus.docs);
    const auto extra_text = "renal " + corpus.vocabulary[0] + " cell";
    corpus.docs.push_back({"zz-new", extra_text});
    const auto after = build_index(corpus.docs);
    const auto added = normalize_text(extra_text);
    for (int q = 0; q < 40; ++q) {
      const auto p = tltest::random_phrase(rng, corpus.vocabulary, 3);
      const auto contains = tltest::BruteCorpus::occurrences(added, p) > 0;
      EXPECT_EQ(after.doc_freq(Phrase(p)), before.doc_freq(Phrase(p)) + (contains ? 1 : 0));
    }
    EXPECT_EQ(after.doc_freq(Phrase(added)), before.doc_freq(Phrase(added)) + 1);
  }
}

TEST(CorpusIo, JsonlAndDirectory) {
  tltest::TempDir dir;
  {
    std::ofstream f(dir / "c.jsonl");
    f << R"({"doc_id":"b","text":"Blood test"})" << "\n\n"
      << R"({"doc_id":"a","text":"blood"})" << "\n";
  }
  const auto idx = build_index_from_path(dir / "c.jsonl");
  EXPECT_EQ(idx.doc_count(), 2u);
  EXPECT_EQ(idx.doc_freq(P("blood")), 2u);

  std::filesystem::create_directories(dir / "docs");
  std::ofstream(dir / "docs" / "x.txt") << "liver disease";
  std::ofstream(dir / "docs" / "y.txt") << "liver";
  const auto didx = build_index_from_path(dir / "docs");
  EXPECT_EQ(didx.doc_ids(), (std::vector<std::string>{"x.txt", "y.txt"}));
  EXPECT_EQ(didx.doc_freq(P("liver")), 2u);
}

TEST(CorpusIo, BadRecordReportsOrdinal) {
  tltest::TempDir dir;
  {
    std::ofstream f(dir / "c.jsonl");
    f << R"({"doc_id":"a","text":"x"})" << "\n" << R"({"doc_id":"b"})" << "\n";
  }
  try {
    build_index_from_path(dir / "c.jsonl");
    FAIL() << "expected BuildError";
  } catch (const BuildError& e) {
    EXPECT_NE(std::string(e.what()).find("record 2"), std::string::npos) << e.what();
  }
  {
    std::ofstream f(dir / "d.jsonl");
    f << "{not json\n";
  }
  EXPECT_THROW(build_index_from_path(dir / "d.jsonl"), BuildError);
}
