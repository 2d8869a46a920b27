#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "support/oracles.hpp"
#include "tracklist/headtail.hpp"
#include "tracklist/log.hpp"

using namespace tracklist;

namespace {

QARecord rec(std::string id, std::string term, Subcorpus s = Subcorpus::kEx) {
  return {std::move(id), std::move(term), QueryType::kDef, "", "gold", s, Source::kClassYN};
}

TermFrequencyRecord tf(const std::string& term, std::uint64_t f, Subcorpus s) {
  return {Phrase::from_text(term), term, f, s};
}

std::vector<TermFrequencyRecord> random_terms(std::mt19937_64& rng) {
  std::vector<TermFrequencyRecord> v;
  const auto n = rng() % 60;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < n; ++i) {
    std::string name = "t" + std::to_string(rng() % 1000);
    if (!seen.insert(name).second) continue;
    const std::uint64_t f = rng() % 4 == 0 ? 0 : rng() % 30;
    v.push_back(tf(name, f, rng() % 2 ? Subcorpus::kEx : Subcorpus::kGp));
  }
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return a.doc_freq != b.doc_freq ? a.doc_freq > b.doc_freq : a.term.tokens() < b.term.tokens();
  });
  return v;
}

class LogCapture {
 public:
  LogCapture() {
    previous_ = log::set_sink([this](log::Level, std::string_view m) { lines.emplace_back(m); });
    log::set_min_level(log::Level::kInfo);
  }
  ~LogCapture() {
    log::set_sink(previous_);
    log::set_min_level(log::Level::kWarning);
  }
  std::vector<std::string> lines;

 private:
  log::Sink previous_;
};

}  // namespace

TEST(RankTerms, OrderAndDedup) {
  const std::vector<DocumentRecord> docs = {{"1", "disease cancer anxiety"}, {"2", "disease cancer"},
                                            {"3", "disease"},              {"4", "beta alpha"}};
  const auto idx = build_index(docs);
  LogCapture capture;
  const std::vector<QARecord> recs = {rec("1", "anxiety"), rec("2", "Disease", Subcorpus::kGp),
                                      rec("3", "cancer"),  rec("4", "disease"),
                                      rec("5", "beta"),    rec("6", "alpha"),
                                      rec("7", "?!")};
  const auto ranked = rank_terms(idx, recs);
  std::vector<std::string> order;
  for (const auto& r : ranked) order.push_back(r.term.text());
  EXPECT_EQ(order, (std::vector<std::string>{"disease", "cancer", "alpha", "anxiety", "beta"}));
  EXPECT_EQ(ranked[0].doc_freq, 3u);
  EXPECT_EQ(ranked[0].subcorpus, Subcorpus::kGp);
  EXPECT_EQ(ranked[0].raw_term, "Disease");
  EXPECT_GE(capture.lines.size(), 2u);
}

TEST(RankTerms, MatchesBruteForce) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto corpus = tltest::random_corpus(rng, 30, 50);
    const auto idx = build_index(corpus.docs);
    const tltest::BruteCorpus oracle(corpus.docs);
    std::vector<QARecord> recs;
    for (int i = 0; i < 15; ++i) {
      recs.push_back(rec("r" + std::to_string(i),
                         join_tokens(tltest::random_phrase(rng, corpus.vocabulary, 2))));
    }
    const auto ranked = rank_terms(idx, recs);
    std::vector<std::pair<std::int64_t, std::vector<std::string>>> expect;
    std::set<std::vector<std::string>> seen;
    for (const auto& r : recs) {
      const auto t = normalize_text(r.term);
      if (seen.insert(t).second) expect.emplace_back(-static_cast<std::int64_t>(oracle.doc_freq(t)), t);
    }
    std::sort(expect.begin(), expect.end());
    ASSERT_EQ(ranked.size(), expect.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      EXPECT_EQ(ranked[i].term.tokens(), expect[i].second);
      EXPECT_EQ(static_cast<std::int64_t>(ranked[i].doc_freq), -expect[i].first);
    }
  }
}

TEST(SelectHeadTail, ToyExtremes) {
  std::vector<TermFrequencyRecord> ranked;
  for (int i = 0; i < 10; ++i) {
    ranked.push_back(tf("t" + std::to_string(i), 100 - 10 * i, i % 2 ? Subcorpus::kGp : Subcorpus::kEx));
  }
  const auto sel = select_head_tail(ranked, SelectionQuotas::balanced(2, 2));
  ASSERT_EQ(sel.head.size(), 2u);
  ASSERT_EQ(sel.tail.size(), 2u);
  EXPECT_EQ(sel.head[0].raw_term, "t0");
  EXPECT_EQ(sel.head[1].raw_term, "t1");
  EXPECT_EQ(sel.tail[0].raw_term, "t8");
  EXPECT_EQ(sel.tail[1].raw_term, "t9");
  EXPECT_EQ(sel.unselected.size(), 6u);
  EXPECT_TRUE(sel.warnings.empty());
}

TEST(SelectHeadTail, AllZero) {
  const std::vector<TermFrequencyRecord> ranked = {tf("a", 0, Subcorpus::kEx), tf("b", 0, Subcorpus::kGp)};
  const auto sel = select_head_tail(ranked);
  EXPECT_TRUE(sel.head.empty());
  EXPECT_TRUE(sel.tail.empty());
  EXPECT_EQ(sel.excluded_zero, (std::vector<std::string>{"a", "b"}));
  EXPECT_FALSE(sel.warnings.empty());
}

TEST(SelectHeadTail, Quotas) {
  EXPECT_EQ(SelectionQuotas{}.head_ex, 25u);
  const auto q = SelectionQuotas::balanced(5, 3);
  EXPECT_EQ(q.head_ex, 3u);
  EXPECT_EQ(q.head_gp, 2u);
  EXPECT_EQ(q.tail_ex, 2u);
  EXPECT_EQ(q.tail_gp, 1u);
}

TEST(SelectHeadTail, PartitionProperties) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const auto ranked = random_terms(rng);
    const SelectionQuotas q{rng() % 6, rng() % 6, rng() % 6, rng() % 6};
    const auto sel = select_head_tail(ranked, q);
    for (auto sub : {Subcorpus::kEx, Subcorpus::kGp}) {
      std::uint64_t head_min = UINT64_MAX, un_max = 0, un_min = UINT64_MAX, tail_max = 0;
      std::size_t nh = 0, nt = 0;
      for (const auto& t : sel.head)
        if (t.subcorpus == sub) head_min = std::min(head_min, t.doc_freq), ++nh;
      for (const auto& t : sel.tail)
        if (t.subcorpus == sub) tail_max = std::max(tail_max, t.doc_freq), ++nt;
      for (const auto& t : sel.unselected)
        if (t.subcorpus == sub) un_max = std::max(un_max, t.doc_freq), un_min = std::min(un_min, t.doc_freq);
      if (nh && un_min != UINT64_MAX) EXPECT_GE(head_min, un_max);
      if (nt && un_min != UINT64_MAX) EXPECT_GE(un_min, tail_max);
      EXPECT_LE(nh, sub == Subcorpus::kEx ? q.head_ex : q.head_gp);
      EXPECT_LE(nt, sub == Subcorpus::kEx ? q.tail_ex : q.tail_gp);
    }
    std::set<std::string> all, parts;
    std::size_t part_count = 0;
    for (const auto& t : ranked) all.insert(t.raw_term);
    for (const auto* list : {&sel.head, &sel.tail, &sel.unselected}) {
      for (const auto& t : *list) {
        EXPECT_GT(t.doc_freq, 0u);
        parts.insert(t.raw_term);
        ++part_count;
      }
    }
    for (const auto& z : sel.excluded_zero) {
      parts.insert(z);
      ++part_count;
    }
    EXPECT_EQ(parts, all);
    EXPECT_EQ(part_count, all.size());

    const auto again = select_head_tail(ranked, q);
    EXPECT_EQ(to_json(again), to_json(sel));
  }
}

TEST(SelectHeadTail, ShortfallWarns) {
  const std::vector<TermFrequencyRecord> ranked = {tf("a", 5, Subcorpus::kEx), tf("b", 1, Subcorpus::kEx)};
  const auto sel = select_head_tail(ranked, {2, 2, 2, 2});
  EXPECT_EQ(sel.head.size() + sel.tail.size(), 2u);
  EXPECT_FALSE(sel.warnings.empty());
}

TEST(TraceTerm, CountsAndNotice) {
  const auto idx = build_index(std::vector<DocumentRecord>{{"d1", "x x y"}, {"d2", "y"}, {"d0", "x"}});
  const auto tr = trace_term(idx, Phrase::from_text("x"));
  ASSERT_EQ(tr.rows.size(), 2u);
  EXPECT_EQ(tr.rows[0].doc_id, "d0");
  EXPECT_EQ(tr.rows[1].doc_id, "d1");
  EXPECT_EQ(tr.rows[1].count, 2u);
  EXPECT_FALSE(tr.notice);
  EXPECT_EQ(trace_term(idx, Phrase::from_text("x"), 1).rows.size(), 1u);
  const auto absent = trace_term(idx, Phrase::from_text("zzz"));
  EXPECT_TRUE(absent.rows.empty());
  EXPECT_TRUE(absent.notice.has_value());
}

TEST(SelectionCsv, Columns) {
  const std::vector<TermFrequencyRecord> ranked = {tf("a, b", 5, Subcorpus::kEx), tf("c", 0, Subcorpus::kGp)};
  std::ostringstream out;
  write_selection_csv(out, select_head_tail(ranked, {1, 0, 0, 0}));
  const auto s = out.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "set,subcorpus,term,raw_term,doc_freq");
  EXPECT_NE(s.find("head,EX,a b,\"a, b\",5"), std::string::npos) << s;
  EXPECT_NE(s.find("excluded_zero"), std::string::npos);
}
