#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tracklist {

// Pragmatic function of a question.
enum class QueryType { kDef, kEx, kDen, kPara, kExp };

// Column order used by every report.
inline constexpr std::array<QueryType, 5> kQueryTypes = {QueryType::kDef, QueryType::kEx,
                                                         QueryType::kDen, QueryType::kPara,
                                                         QueryType::kExp};

std::string_view to_string(QueryType t);
std::optional<QueryType> parse_query_type(std::string_view s);

enum class Subcorpus { kEx, kGp };  // expert-oriented / general public
enum class Source { kClassYN, kClear };

std::string_view to_string(Subcorpus s);
std::string_view to_string(Source s);
std::optional<Subcorpus> parse_subcorpus(std::string_view s);
std::optional<Source> parse_source(std::string_view s);

struct QARecord {
  std::string record_id;
  std::string term;
  QueryType query_type = QueryType::kDef;
  std::string question;  // may be empty; prompts are built from term + type
  std::string gold_answer;
  Subcorpus subcorpus = Subcorpus::kEx;
  Source source = Source::kClassYN;
};

// Reads a dataset. Files ending in .csv are parsed as CSV with a header row;
// anything else as JSONL. Required fields: record_id, term, query_type,
// gold_answer, subcorpus, source; `question` is optional. Errors carry the
// line number (FormatError).
std::vector<QARecord> load_dataset(const std::filesystem::path& path);
std::vector<QARecord> read_dataset_jsonl(std::istream& in);
std::vector<QARecord> read_dataset_csv(std::istream& in);

struct TypeCounts {
  std::array<std::size_t, 5> by_type{};
  std::size_t total = 0;

  std::size_t operator[](QueryType t) const { return by_type[static_cast<std::size_t>(t)]; }
};

TypeCounts count_by_type(std::span<const QARecord> records);

// Question templates per query type, joined with a system preamble. The
// shipped defaults are compiled in from data/prompt_templates.json.
class PromptTemplates {
 public:
  static const PromptTemplates& defaults();
  static PromptTemplates load(const std::filesystem::path& path);
  static PromptTemplates parse(std::string_view json_text);

  const std::string& preamble() const noexcept { return preamble_; }
  const std::string& format() const noexcept { return format_; }
  const std::string& template_for(QueryType t) const;
  const std::vector<std::string>& alternates(QueryType t) const;

  std::string question(std::string_view term, QueryType t) const;
  std::string prompt(std::string_view term, QueryType t) const;

 private:
  std::string preamble_;
  std::string format_;
  std::map<QueryType, std::string> templates_;
  std::map<QueryType, std::vector<std::string>> alternates_;
};

// Prompt for `term` under `type`. Throws ArgumentError on a blank term.
std::string build_query(std::string_view term, QueryType type,
                        const PromptTemplates& templates = PromptTemplates::defaults());

}  // namespace tracklist
