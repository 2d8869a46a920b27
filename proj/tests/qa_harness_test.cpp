#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support/temp_dir.hpp"
#include "tracklist/error.hpp"
#include "tracklist/qa_harness.hpp"

using namespace tracklist;

namespace {

std::string row(const std::string& id, const std::string& type, const std::string& term = "fever",
                const std::string& sub = "EX") {
  return R"({"record_id":")" + id + R"(","term":")" + term + R"(","query_type":")" + type +
         R"(","gold_answer":"a raised body temperature","subcorpus":")" + sub +
         R"(","source":"ClassYN"})" + "\n";
}

std::string error_of(const std::string& content, const std::string& name = "d.jsonl") {
  tltest::TempDir dir;
  std::ofstream(dir / name) << content;
  try {
    load_dataset(dir / name);
  } catch (const FormatError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(QueryType, RoundTrip) {
  for (auto t : kQueryTypes) EXPECT_EQ(parse_query_type(to_string(t)), t);
  EXPECT_EQ(parse_query_type("para"), QueryType::kPara);
  EXPECT_FALSE(parse_query_type("DEFN").has_value());
  EXPECT_EQ(to_string(Subcorpus::kGp), "GP");
  EXPECT_EQ(parse_source("CLEAR"), Source::kClear);
}

TEST(LoadDataset, OnePerType) {
  tltest::TempDir dir;
  {
    std::ofstream f(dir / "d.jsonl");
    int i = 0;
    for (auto t : kQueryTypes) f << row("r" + std::to_string(i++), std::string(to_string(t)));
  }
  const auto recs = load_dataset(dir / "d.jsonl");
  ASSERT_EQ(recs.size(), 5u);
  const auto counts = count_by_type(recs);
  for (auto t : kQueryTypes) EXPECT_EQ(counts[t], 1u);
  EXPECT_EQ(counts.total, 5u);
  EXPECT_EQ(recs[0].gold_answer, "a raised body temperature");
  EXPECT_TRUE(recs[0].question.empty());
}

TEST(LoadDataset, EmptyFile) {
  tltest::TempDir dir;
  std::ofstream(dir / "e.jsonl") << "";
  EXPECT_TRUE(load_dataset(dir / "e.jsonl").empty());
}

TEST(LoadDataset, ErrorsCarryLineAndValue) {
  const auto missing = error_of(row("a", "DEF") + R"({"record_id":"b","term":"x","query_type":"DEF"})" "\n");
  EXPECT_NE(missing.find("line 2"), std::string::npos) << missing;
  EXPECT_NE(missing.find("gold_answer"), std::string::npos) << missing;

  const auto unknown = error_of(row("a", "DEF") + row("b", "DEF") + row("c", "QUIZ"));
  EXPECT_NE(unknown.find("line 3"), std::string::npos) << unknown;
  EXPECT_NE(unknown.find("QUIZ"), std::string::npos) << unknown;

  EXPECT_NE(error_of(row("a", "DEF") + row("a", "EX")).find("duplicate"), std::string::npos);
  EXPECT_NE(error_of(row("a", "DEF", "")).find("empty term"), std::string::npos);
  EXPECT_NE(error_of(row("a", "DEF", "x", "XX")).find("subcorpus"), std::string::npos);
  EXPECT_NE(error_of("{oops\n").find("line 1"), std::string::npos);
}

TEST(LoadDataset, Csv) {
  tltest::TempDir dir;
  std::ofstream(dir / "d.csv")
      << "record_id,term,query_type,question,gold_answer,subcorpus,source\r\n"
      << "1,hypotension,PARA,,\"low blood pressure, often \"\"mild\"\"\",GP,CLEAR\r\n"
      << "2,\"heart and vascular diseases\",EX,What are examples?,\"stroke\nand angina\",EX,ClassYN\n";
  const auto recs = load_dataset(dir / "d.csv");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].gold_answer, "low blood pressure, often \"mild\"");
  EXPECT_EQ(recs[0].subcorpus, Subcorpus::kGp);
  EXPECT_EQ(recs[1].gold_answer, "stroke\nand angina");
  EXPECT_EQ(recs[1].question, "What are examples?");

  const auto bad = error_of("record_id,term,query_type,gold_answer,subcorpus,source\n1,x,NOPE,y,EX,CLEAR\n",
                            "b.csv");
  EXPECT_NE(bad.find("line 2"), std::string::npos) << bad;
  EXPECT_NE(bad.find("NOPE"), std::string::npos) << bad;
  const auto missing = error_of("record_id,term,gold_answer,subcorpus,source\n1,x,y,EX,CLEAR\n", "m.csv");
  EXPECT_NE(missing.find("query_type"), std::string::npos) << missing;
}

TEST(BuildQuery, TemplatesFromTableOne) {
  const std::string preamble = "You are a medical expert. Answer the following question in a short sentence";
  const auto def = build_query("multiple sclerosis", QueryType::kDef);
  EXPECT_EQ(def, preamble + "\nGive a definition for multiple sclerosis");
  EXPECT_NE(build_query("heart and vascular diseases", QueryType::kEx).find("Give examples of"),
            std::string::npos);
  EXPECT_NE(build_query("hypotension", QueryType::kPara).find("Give a paraphrase for hypotension"),
            std::string::npos);
  EXPECT_NE(build_query("x", QueryType::kDen).find("Give another denomination for x"), std::string::npos);
  EXPECT_NE(build_query("x", QueryType::kExp).find("Give an explanation for x"), std::string::npos);
  EXPECT_EQ(PromptTemplates::defaults().alternates(QueryType::kDef),
            std::vector<std::string>{"What is {term}"});
  EXPECT_THROW(build_query(" ", QueryType::kDef), ArgumentError);
}

TEST(BuildQuery, CustomTemplates) {
  const auto t = PromptTemplates::parse(R"({
    "preamble": "P", "format": "{preamble} | {question}",
    "templates": {"DEF": "What is {term}", "EX": "e {term}", "DEN": "d {term}",
                  "PARA": "p {term}", "EXP": "x {term}"}})");
  EXPECT_EQ(build_query("asthma", QueryType::kDef, t), "P | What is asthma");
  EXPECT_EQ(t.question("asthma", QueryType::kEx), "e asthma");
  EXPECT_THROW(PromptTemplates::parse(R"({"preamble":"P","templates":{"DEF":"d"}})"), FormatError);
}

TEST(BuildQuery, ShippedTemplateFileMatchesDefaults) {
  const auto file = PromptTemplates::load(TRACKLIST_SOURCE_DIR "/data/prompt_templates.json");
  for (auto t : kQueryTypes) {
    EXPECT_EQ(file.prompt("term", t), PromptTemplates::defaults().prompt("term", t));
  }
}
