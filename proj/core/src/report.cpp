#include "tracklist/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "tracklist/error.hpp"
#include "tracklist/qa_harness.hpp"

namespace tracklist {
namespace {

nlohmann::json opt(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> opt_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

std::string csv_cell(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string md_cell(const CorrelationCell* c) {
  if (c == nullptr) return "";
  if (!c->r) return "NA (n=" + std::to_string(c->n) + ")";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f%s (n=%zu)", *c->r, c->significant() ? "*" : "", c->n);
  return buf;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + p.string());
  out << content;
  if (!out) throw Error("failed writing " + p.string());
}

using CellKey = std::tuple<std::string, std::string, std::string>;

std::map<CellKey, const CorrelationCell*> by_key(const std::vector<CorrelationCell>& cells) {
  std::map<CellKey, const CorrelationCell*> m;
  for (const auto& c : cells) m[{c.model, c.criterion, c.subcorpus}] = &c;
  return m;
}

std::vector<std::string> models_of(const CorrelationReport& r) {
  std::vector<std::string> names;
  for (const auto& m : r.provenance.models) names.push_back(m.name);
  return names;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

nlohmann::json to_json(const CorrelationCell& c) {
  return {{"model", c.model},   {"criterion", c.criterion}, {"subcorpus", c.subcorpus},
          {"n", c.n},           {"excluded", c.excluded},   {"degenerate", c.degenerate},
          {"r", opt(c.r)},      {"p_value", opt(c.p_value)}, {"significant", c.significant()},
          {"note", c.note}};
}

CorrelationCell cell_from_json(const nlohmann::json& j) {
  CorrelationCell c;
  c.model = j.at("model").get<std::string>();
  c.criterion = j.at("criterion").get<std::string>();
  c.subcorpus = j.at("subcorpus").get<std::string>();
  c.n = j.at("n").get<std::size_t>();
  c.excluded = j.value("excluded", std::size_t{0});
  c.degenerate = j.value("degenerate", std::size_t{0});
  c.r = opt_from(j, "r");
  c.p_value = opt_from(j, "p_value");
  c.note = j.value("note", std::string());
  return c;
}

nlohmann::json to_json(const CorrelationReport& r) {
  const auto& p = r.provenance;
  nlohmann::json models = nlohmann::json::array();
  for (const auto& m : p.models) {
    models.push_back({{"name", m.name},
                      {"kind", m.kind},
                      {"max_tokens", m.max_tokens},
                      {"temperature", m.temperature}});
  }
  auto cells = [](const std::vector<CorrelationCell>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& c : v) a.push_back(to_json(c));
    return a;
  };
  return {
      {"provenance",
       {{"config_hash", p.config_hash},
        {"normalization", p.normalization},
        {"corpus_documents", p.corpus_documents},
        {"dataset_records", p.dataset_records},
        {"embedding_backend",
         {{"name", p.embedding.name},
          {"dim", p.embedding.dim},
          {"deterministic", p.embedding.deterministic}}},
        {"models", models},
        {"answer_metric", p.answer_metric},
        {"ngram_selection_metric", p.ngram_selection_metric},
        {"ngram_range", {p.ngram_min, p.ngram_max}},
        {"top_k", p.top_k},
        {"seed", p.seed},
        {"manifest", p.manifest}}},
      {"quality_vs_frequency", cells(r.quality_vs_frequency)},
      {"similarity_vs_cooccurrence", cells(r.similarity_vs_cooccurrence)}};
}

CorrelationReport report_from_json(const nlohmann::json& j) {
  CorrelationReport r;
  try {
    const auto& p = j.at("provenance");
    auto& out = r.provenance;
    out.config_hash = p.at("config_hash").get<std::string>();
    out.normalization = p.at("normalization").get<std::string>();
    out.corpus_documents = p.at("corpus_documents").get<std::uint64_t>();
    out.dataset_records = p.at("dataset_records").get<std::size_t>();
    const auto& e = p.at("embedding_backend");
    out.embedding = {e.at("name").get<std::string>(), e.at("dim").get<std::size_t>(),
                     e.at("deterministic").get<bool>()};
    for (const auto& m : p.at("models")) {
      out.models.push_back({m.at("name").get<std::string>(), m.at("kind").get<std::string>(),
                            m.at("max_tokens").get<int>(), m.at("temperature").get<double>()});
    }
    out.answer_metric = p.at("answer_metric").get<std::string>();
    out.ngram_selection_metric = p.at("ngram_selection_metric").get<std::string>();
    out.ngram_min = p.at("ngram_range").at(0).get<std::size_t>();
    out.ngram_max = p.at("ngram_range").at(1).get<std::size_t>();
    out.top_k = p.at("top_k").get<std::size_t>();
    out.seed = p.at("seed").get<std::uint64_t>();
    out.manifest = p.value("manifest", out.manifest);
    for (const auto& c : j.at("quality_vs_frequency")) r.quality_vs_frequency.push_back(cell_from_json(c));
    for (const auto& c : j.at("similarity_vs_cooccurrence")) {
      r.similarity_vs_cooccurrence.push_back(cell_from_json(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report: ") + e.what());
  }
  return r;
}

std::string report_csv(const CorrelationReport& r) {
  std::ostringstream out;
  out << "table,model,criterion,subcorpus,n,excluded,degenerate,r,p_value,significant,note\n";
  auto rows = [&](std::string_view table, const std::vector<CorrelationCell>& cells) {
    for (const auto& c : cells) {
      out << table << ',' << csv_cell(c.model) << ',' << c.criterion << ',' << c.subcorpus << ','
          << c.n << ',' << c.excluded << ',' << c.degenerate << ','
          << (c.r ? format_double(*c.r) : "") << ','
          << (c.p_value ? format_double(*c.p_value) : "") << ','
          << (c.significant() ? "true" : "false") << ',' << csv_cell(c.note) << '\n';
    }
  };
  rows("quality_vs_frequency", r.quality_vs_frequency);
  rows("similarity_vs_cooccurrence", r.similarity_vs_cooccurrence);
  return out.str();
}

std::string report_markdown(const CorrelationReport& r) {
  std::ostringstream out;
  const auto& p = r.provenance;
  out << "# Correlation report\n\n";
  out << "Config hash `" << p.config_hash << "`, embedding backend `" << p.embedding.name
      << "` (dim " << p.embedding.dim << "), " << p.corpus_documents << " corpus documents, "
      << p.dataset_records << " dataset records. `*` marks p < 0.05.\n\n";

  const auto q = by_key(r.quality_vs_frequency);
  out << "## Answer quality vs log10 document frequency\n\n";
  out << "Pearson r between " << p.answer_metric << " F1 and log10(doc_freq(term)).\n\n";
  for (const auto& model : models_of(r)) {
    out << "### " << model << "\n\n| Subcorpus |";
    for (auto t : kQueryTypes) out << ' ' << to_string(t) << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < kQueryTypes.size(); ++i) out << "---|";
    out << '\n';
    for (const char* sub : kSubcorpusLabels) {
      out << "| " << sub << " |";
      for (auto t : kQueryTypes) {
        const auto it = q.find({model, std::string(to_string(t)), sub});
        out << ' ' << md_cell(it == q.end() ? nullptr : it->second) << " |";
      }
      out << '\n';
    }
    out << '\n';
  }

  const auto s = by_key(r.similarity_vs_cooccurrence);
  out << "## Top-" << p.top_k << " n-gram similarity vs co-occurrence probability\n\n";
  out << "| Criteria | Model | EX | GP | full |\n|---|---|---|---|---|\n";
  for (const char* crit : kHeadTailLabels) {
    for (const auto& model : models_of(r)) {
      out << "| " << crit << " | " << model << " |";
      for (const char* sub : kSubcorpusLabels) {
        const auto it = s.find({model, crit, sub});
        out << ' ' << md_cell(it == s.end() ? nullptr : it->second) << " |";
      }
      out << '\n';
    }
  }
  return out.str();
}

void ensure_writable_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto probe = dir / ".write_probe";
  {
    std::ofstream out(probe, std::ios::trunc);
    if (!out || !(out << "ok")) throw Error("output directory is not writable: " + dir.string());
  }
  std::filesystem::remove(probe, ec);
}

std::vector<std::filesystem::path> emit_report(const CorrelationReport& r,
                                               const std::filesystem::path& dir,
                                               const std::set<ReportFormat>& formats) {
  ensure_writable_dir(dir);
  std::vector<std::filesystem::path> written;
  if (formats.contains(ReportFormat::kCsv)) {
    written.push_back(dir / "report.csv");
    write_file(written.back(), report_csv(r));
  }
  if (formats.contains(ReportFormat::kJson)) {
    written.push_back(dir / "report.json");
    write_file(written.back(), to_json(r).dump(2) + "\n");
  }
  if (formats.contains(ReportFormat::kMarkdown)) {
    written.push_back(dir / "report.md");
    write_file(written.back(), report_markdown(r));
  }
  return written;
}

}  // namespace tracklist
