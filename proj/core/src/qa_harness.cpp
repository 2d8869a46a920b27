#include "tracklist/qa_harness.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "prompt_templates_default.hpp"
#include "tracklist/error.hpp"
#include "tracklist/text.hpp"

namespace tracklist {
namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

using FieldMap = std::map<std::string, std::string, std::less<>>;

const std::string& required(const FieldMap& f, std::string_view name, std::size_t line) {
  const auto it = f.find(name);
  if (it == f.end()) throw FormatError("missing field '" + std::string(name) + "'", line);
  return it->second;
}

QARecord record_from_fields(const FieldMap& f, std::size_t line) {
  QARecord r;
  r.record_id = std::string(trim(required(f, "record_id", line)));
  r.term = std::string(trim(required(f, "term", line)));
  r.gold_answer = std::string(trim(required(f, "gold_answer", line)));
  if (r.record_id.empty()) throw FormatError("empty record_id", line);
  if (r.term.empty()) throw FormatError("empty term", line);
  if (r.gold_answer.empty()) throw FormatError("empty gold_answer", line);

  const auto& qt = required(f, "query_type", line);
  const auto type = parse_query_type(qt);
  if (!type) throw FormatError("unknown query_type '" + qt + "'", line);
  r.query_type = *type;

  const auto& sc = required(f, "subcorpus", line);
  const auto sub = parse_subcorpus(sc);
  if (!sub) throw FormatError("unknown subcorpus '" + sc + "' (expected EX or GP)", line);
  r.subcorpus = *sub;

  const auto& so = required(f, "source", line);
  const auto src = parse_source(so);
  if (!src) throw FormatError("unknown source '" + so + "' (expected ClassYN or CLEAR)", line);
  r.source = *src;

  if (auto it = f.find("question"); it != f.end()) r.question = it->second;
  return r;
}

void check_unique(std::vector<QARecord>& records, std::unordered_set<std::string>& ids,
                  std::size_t line) {
  if (!ids.insert(records.back().record_id).second) {
    throw FormatError("duplicate record_id '" + records.back().record_id + "'", line);
  }
}

struct CsvRow {
  std::size_t line = 0;  // line on which the row starts
  std::vector<std::string> cells;
};

// RFC 4180: quoted cells may contain commas, doubled quotes and newlines.
std::vector<CsvRow> parse_csv(std::istream& in) {
  std::vector<CsvRow> rows;
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t line = 1;
  CsvRow row{line, {}};
  std::string cell;
  bool quoted = false;
  bool row_has_content = false;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const char c = data[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        cell.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        row_has_content = true;
        break;
      case ',':
        row.cells.push_back(std::move(cell));
        cell.clear();
        row_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        if (row_has_content || !cell.empty()) {
          row.cells.push_back(std::move(cell));
          rows.push_back(std::move(row));
        }
        cell.clear();
        ++line;
        row = CsvRow{line, {}};
        row_has_content = false;
        break;
      default:
        cell.push_back(c);
        row_has_content = true;
    }
  }
  if (quoted) throw FormatError("unterminated quoted cell", row.line);
  if (row_has_content || !cell.empty()) {
    row.cells.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

void substitute(std::string& s, std::string_view key, std::string_view value) {
  for (std::size_t pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos + value.size())) {
    s.replace(pos, key.size(), value);
  }
}

}  // namespace

std::string_view to_string(QueryType t) {
  switch (t) {
    case QueryType::kDef: return "DEF";
    case QueryType::kEx: return "EX";
    case QueryType::kDen: return "DEN";
    case QueryType::kPara: return "PARA";
    case QueryType::kExp: return "EXP";
  }
  return "?";
}

std::optional<QueryType> parse_query_type(std::string_view s) {
  const auto u = upper(trim(s));
  for (auto t : kQueryTypes) {
    if (u == to_string(t)) return t;
  }
  return std::nullopt;
}

std::string_view to_string(Subcorpus s) { return s == Subcorpus::kEx ? "EX" : "GP"; }
std::string_view to_string(Source s) { return s == Source::kClassYN ? "ClassYN" : "CLEAR"; }

std::optional<Subcorpus> parse_subcorpus(std::string_view s) {
  const auto u = upper(trim(s));
  if (u == "EX") return Subcorpus::kEx;
  if (u == "GP") return Subcorpus::kGp;
  return std::nullopt;
}

std::optional<Source> parse_source(std::string_view s) {
  const auto u = upper(trim(s));
  if (u == "CLASSYN") return Source::kClassYN;
  if (u == "CLEAR") return Source::kClear;
  return std::nullopt;
}

std::vector<QARecord> read_dataset_jsonl(std::istream& in) {
  std::vector<QARecord> records;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(std::string("invalid JSON: ") + e.what(), lineno);
    }
    if (!obj.is_object()) throw FormatError("expected a JSON object", lineno);
    FieldMap fields;
    for (const auto& [k, v] : obj.items()) {
      if (v.is_string()) {
        fields.emplace(k, v.get<std::string>());
      } else if (!v.is_null()) {
        fields.emplace(k, v.dump());
      }
    }
    records.push_back(record_from_fields(fields, lineno));
    check_unique(records, ids, lineno);
  }
  return records;
}

std::vector<QARecord> read_dataset_csv(std::istream& in) {
  const auto rows = parse_csv(in);
  std::vector<QARecord> records;
  if (rows.empty()) return records;
  std::vector<std::string> header;
  for (const auto& h : rows.front().cells) header.emplace_back(trim(h));
  std::unordered_set<std::string> ids;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.cells.size() != header.size()) {
      throw FormatError("expected " + std::to_string(header.size()) + " cells, found " +
                            std::to_string(row.cells.size()),
                        row.line);
    }
    FieldMap fields;
    for (std::size_t c = 0; c < header.size(); ++c) fields.emplace(header[c], row.cells[c]);
    records.push_back(record_from_fields(fields, row.line));
    check_unique(records, ids, row.line);
  }
  return records;
}

std::vector<QARecord> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open dataset: " + path.string());
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  try {
    return ext == ".csv" ? read_dataset_csv(in) : read_dataset_jsonl(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

TypeCounts count_by_type(std::span<const QARecord> records) {
  TypeCounts c;
  for (const auto& r : records) ++c.by_type[static_cast<std::size_t>(r.query_type)];
  c.total = records.size();
  return c;
}

const PromptTemplates& PromptTemplates::defaults() {
  static const PromptTemplates t = parse(detail::kDefaultPromptTemplates);
  return t;
}

PromptTemplates PromptTemplates::parse(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("prompt templates: ") + e.what());
  }
  PromptTemplates t;
  t.preamble_ = j.value("preamble", "");
  t.format_ = j.value("format", std::string("{preamble}\n{question}"));
  if (!j.contains("templates") || !j["templates"].is_object()) {
    throw FormatError("prompt templates: missing 'templates' object");
  }
  for (const auto& [k, v] : j["templates"].items()) {
    const auto type = parse_query_type(k);
    if (!type) throw FormatError("prompt templates: unknown query type '" + k + "'");
    t.templates_[*type] = v.get<std::string>();
  }
  for (auto type : kQueryTypes) {
    if (!t.templates_.contains(type)) {
      throw FormatError("prompt templates: no template for " + std::string(to_string(type)));
    }
  }
  if (j.contains("alternates")) {
    for (const auto& [k, v] : j["alternates"].items()) {
      const auto type = parse_query_type(k);
      if (!type) throw FormatError("prompt templates: unknown query type '" + k + "'");
      t.alternates_[*type] = v.get<std::vector<std::string>>();
    }
  }
  return t;
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open prompt templates: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const std::string& PromptTemplates::template_for(QueryType t) const { return templates_.at(t); }

const std::vector<std::string>& PromptTemplates::alternates(QueryType t) const {
  static const std::vector<std::string> none;
  const auto it = alternates_.find(t);
  return it == alternates_.end() ? none : it->second;
}

std::string PromptTemplates::question(std::string_view term, QueryType t) const {
  std::string q = template_for(t);
  substitute(q, "{term}", term);
  return q;
}

std::string PromptTemplates::prompt(std::string_view term, QueryType t) const {
  std::string p = format_;
  const auto q = question(term, t);
  // Substitute question first so a term containing "{preamble}" stays literal.
  const auto qpos = p.find("{question}");
  std::string head = p.substr(0, qpos == std::string::npos ? p.size() : qpos);
  substitute(head, "{preamble}", preamble_);
  if (qpos == std::string::npos) return head;
  std::string tail = p.substr(qpos + std::string_view("{question}").size());
  substitute(tail, "{preamble}", preamble_);
  return head + q + tail;
}

std::string build_query(std::string_view term, QueryType type, const PromptTemplates& templates) {
  const auto t = trim(term);
  if (t.empty()) throw ArgumentError("build_query: empty term");
  return templates.prompt(t, type);
}

}  // namespace tracklist
