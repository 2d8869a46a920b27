#include "tracklist/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "tracklist/error.hpp"
#include "tracklist/headtail.hpp"
#include "tracklist/http_backends.hpp"
#include "tracklist/log.hpp"
#include "tracklist/similarity.hpp"
#include "tracklist/stats.hpp"

namespace tracklist {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kFull = "full";

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Content digest of a file, or of every file under a directory (names included).
std::string digest(const fs::path& p) {
  if (p.empty() || !fs::exists(p)) return "absent";
  if (!fs::is_directory(p)) return hex64(fnv1a64(read_file(p)));
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(p)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::uint64_t h = fnv1a64("");
  for (const auto& f : files) {
    h = fnv1a64(fs::relative(f, p).generic_string(), h);
    h = fnv1a64(read_file(f), h);
  }
  return hex64(h);
}

// Writes through a temporary file so a crash never leaves a half-written output.
void write_atomic(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  const auto tmp = fs::path(p.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("failed writing " + tmp.string());
  }
  fs::rename(tmp, p);
}

std::string jsonl(const std::vector<json>& rows) {
  std::string s;
  for (const auto& r : rows) s += r.dump() + "\n";
  return s;
}

std::vector<json> read_jsonl(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("missing intermediate artifact: " + p.string());
  std::vector<json> rows;
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      rows.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw FormatError(p.string() + ": " + e.what(), lineno);
    }
  }
  return rows;
}

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Sample {
  double x;
  double y;
};

CorrelationCell correlate(std::string model, std::string criterion, std::string subcorpus,
                          const std::vector<Sample>& samples, std::size_t excluded,
                          std::size_t degenerate, const char* x_label, const char* y_label) {
  CorrelationCell cell{std::move(model), std::move(criterion), std::move(subcorpus),
                       samples.size(), excluded, degenerate, std::nullopt, std::nullopt, ""};
  if (samples.size() < 3) {
    cell.note = "fewer than 3 samples";
    return cell;
  }
  std::vector<double> xs, ys;
  for (const auto& s : samples) {
    xs.push_back(s.x);
    ys.push_back(s.y);
  }
  try {
    const auto r = pearson(xs, ys, x_label, y_label);
    cell.r = r.r;
    cell.p_value = r.p_value;
  } catch (const DegenerateInputError& e) {
    cell.note = "constant series: " + e.series();
  }
  return cell;
}

bool in_subcorpus(const std::string& label, Subcorpus s) {
  return label == kFull || label == to_string(s);
}

}  // namespace

std::string first_sentence(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if ((c == '.' || c == '!' || c == '?') &&
        (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])))) {
      return std::string(text.substr(0, i + 1));
    }
  }
  return std::string(text);
}

std::shared_ptr<EmbeddingBackend> make_embedding_backend(const EmbeddingConfig& config,
                                                         std::uint64_t seed) {
  std::shared_ptr<EmbeddingBackend> inner;
  if (config.kind == "hash") {
    inner = std::make_shared<HashEmbeddingBackend>(seed, config.dim);
  } else if (config.kind == "http") {
    inner = std::make_shared<HttpEmbeddingBackend>(config.endpoint, config.batch_size,
                                                   config.deterministic);
  } else {
    throw ArgumentError("unknown embedding backend kind '" + config.kind + "'");
  }
  return std::make_shared<CachingEmbeddingBackend>(std::move(inner));
}

std::shared_ptr<GenerationBackend> make_generation_backend(const ModelConfig& config) {
  if (config.kind == "echo") return std::make_shared<ScriptedGenerationBackend>(config.name);
  if (config.kind == "scripted") {
    auto script = ScriptedGenerationBackend::load_script(config.script);
    script.echo_term = false;
    return std::make_shared<ScriptedGenerationBackend>(config.name, std::move(script));
  }
  if (config.kind == "http") return std::make_shared<HttpGenerationBackend>(config.name, config.endpoint);
  throw ArgumentError("unknown model kind '" + config.kind + "'");
}

Pipeline::Pipeline(RunConfig config, PipelineBackends backends)
    : config_(std::move(config)), injected_(std::move(backends)) {}

void Pipeline::prepare() {
  if (prepared_) return;
  config_.validate();
  ensure_writable_dir(out());
  for (const char* d : {"index", "answers", "scores", "correlations", ".stamps"}) {
    fs::create_directories(out() / d);
  }
  prepared_ = true;
}

void Pipeline::record(const std::string& step, bool ran) {
  steps_.push_back({step, ran});
  log::info(std::string(ran ? "ran " : "reused ") + step);
}

bool Pipeline::up_to_date(const std::string& step, const std::string& hash,
                          const std::vector<fs::path>& outputs) const {
  const auto stamp = out() / ".stamps" / (step + ".stamp");
  if (!fs::exists(stamp) || read_file(stamp) != hash) return false;
  return std::all_of(outputs.begin(), outputs.end(), [](const fs::path& p) { return fs::exists(p); });
}

void Pipeline::write_stamp(const std::string& step, const std::string& hash) const {
  write_atomic(out() / ".stamps" / (step + ".stamp"), hash);
}

const std::vector<QARecord>& Pipeline::records() {
  if (!records_) records_ = load_dataset(config_.dataset);
  return *records_;
}

const PromptTemplates& Pipeline::templates() {
  if (!templates_) {
    templates_ = config_.prompts.empty() ? PromptTemplates::defaults()
                                         : PromptTemplates::load(config_.prompts);
  }
  return *templates_;
}

EmbeddingBackend& Pipeline::embedding() {
  if (!embedding_) {
    embedding_ = injected_.embedding ? injected_.embedding
                                     : make_embedding_backend(config_.embedding, config_.seed);
  }
  return *embedding_;
}

GenerationBackend& Pipeline::model_backend(const ModelConfig& m) {
  auto& slot = models_[m.name];
  if (!slot) {
    const auto it = injected_.models.find(m.name);
    slot = it != injected_.models.end() ? it->second : make_generation_backend(m);
  }
  return *slot;
}

std::string Pipeline::answer_text(const GeneratedAnswer& a) const {
  return config_.truncate_first_sentence ? first_sentence(a.text) : a.text;
}

std::string Pipeline::index_digest() {
  if (!index_digest_) {
    index_digest_ = config_.index.empty()
                        ? hex64(fnv1a64(digest(config_.corpus) + std::string(kNormalizationVersion)))
                        : digest(config_.index);
  }
  return *index_digest_;
}

const DocFreqIndex& Pipeline::index() {
  if (index_) return *index_;
  prepare();
  try {
    if (!config_.index.empty()) {
      index_ = DocFreqIndex::load(config_.index);
      record("index", false);
    } else {
      const auto path = out() / "index" / "index.bin";
      const auto hash = index_digest();
      if (up_to_date("index", hash, {path})) {
        index_ = DocFreqIndex::load(path);
        record("index", false);
      } else {
        index_ = build_index_from_path(config_.corpus, config_.threads);
        index_->save(path);
        write_stamp("index", hash);
        record("index", true);
      }
    }
    write_atomic(out() / "index" / "summary.json",
                 json{{"doc_count", index_->doc_count()},
                      {"vocabulary_size", index_->vocabulary_size()},
                      {"normalization", index_->normalization()},
                      {"digest", index_digest()}}
                         .dump(2) + "\n");
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError("index", e.what());
  }
  return *index_;
}

RunStatus Pipeline::step_generate() {
  prepare();
  try {
    const auto& recs = records();
    std::vector<GenerationItem> items;
    items.reserve(recs.size());
    for (const auto& r : recs) {
      items.push_back({r.record_id, r.term, build_query(r.term, r.query_type, templates())});
    }
    json models = json::array();
    for (const auto& m : config_.models) {
      models.push_back({m.name, m.kind, m.max_tokens, m.temperature, digest(m.script), m.endpoint.url});
    }
    const auto hash = hex64(fnv1a64(digest(config_.dataset) + digest(config_.prompts) + models.dump()));
    std::vector<fs::path> outputs;
    for (const auto& m : config_.models) outputs.push_back(out() / "answers" / m.name / "answers.jsonl");
    if (up_to_date("generate", hash, outputs)) {
      record("generate", false);
      return RunStatus::kOk;
    }

    RunStatus status = RunStatus::kOk;
    if (recs.empty()) {
      for (const auto& p : outputs) write_atomic(p, "");
    } else {
      for (const auto& m : config_.models) {
        const auto dir = out() / "answers" / m.name;
        // Answers from a differently configured model are stale, not resumable.
        const json model_json = {{"kind", m.kind}, {"max_tokens", m.max_tokens},
                                 {"temperature", m.temperature}, {"script", digest(m.script)},
                                 {"endpoint", m.endpoint.url}};
        const auto model_file = dir / "model.json";
        if (fs::exists(model_file) && json::parse(read_file(model_file)) != model_json) {
          fs::remove(dir / "answers.jsonl");
        }
        write_atomic(model_file, model_json.dump(2) + "\n");

        AnswerStore store(dir);
        const GenerationOptions opts{m.max_tokens, m.temperature, m.concurrency};
        const auto res = generate(model_backend(m), items, opts, &store);
        if (res.status() == RunStatus::kPartial) {
          status = RunStatus::kPartial;
          log::warn("model " + m.name + ": " + std::to_string(res.errors.size()) +
                    " generation failures recorded in " + store.errors_path().string());
        }
      }
    }
    if (status == RunStatus::kOk) write_stamp("generate", hash);
    record("generate", true);
    return status;
  } catch (const std::exception& e) {
    throw PipelineError("generate", e.what());
  }
}

void Pipeline::step_frequency() {
  prepare();
  try {
    const auto output = out() / "scores" / "term_freqs.jsonl";
    const auto hash = hex64(fnv1a64(index_digest() + digest(config_.dataset)));
    if (up_to_date("frequency", hash, {output})) {
      record("frequency", false);
      return;
    }
    const auto ranked = rank_terms(index(), records());
    std::vector<json> rows;
    for (const auto& t : ranked) rows.push_back(to_json(t));
    write_atomic(output, jsonl(rows));
    write_stamp("frequency", hash);
    record("frequency", true);
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError("frequency", e.what());
  }
}

void Pipeline::step_score() {
  prepare();
  try {
    std::string inputs = digest(config_.dataset) + embedding().descriptor().name +
                         std::to_string(embedding().descriptor().dim) +
                         (config_.truncate_first_sentence ? "T" : "F");
    std::vector<fs::path> outputs;
    for (const auto& m : config_.models) {
      inputs += digest(out() / "answers" / m.name / "answers.jsonl");
      outputs.push_back(out() / "scores" / m.name / "bertscore.jsonl");
    }
    const auto hash = hex64(fnv1a64(inputs));
    if (up_to_date("score", hash, outputs)) {
      record("score", false);
      return;
    }
    for (std::size_t mi = 0; mi < config_.models.size(); ++mi) {
      const auto& m = config_.models[mi];
      std::unordered_map<std::string, GeneratedAnswer> answers;
      for (auto& a : read_answers(out() / "answers" / m.name / "answers.jsonl")) {
        answers.emplace(a.record_id, std::move(a));
      }
      std::vector<json> rows;
      for (const auto& r : records()) {
        const auto it = answers.find(r.record_id);
        if (it == answers.end()) continue;
        const auto text = answer_text(it->second);
        MetricScore s;
        bool degenerate = trim(text).empty();
        if (!degenerate) s = bertscore(text, r.gold_answer, embedding());
        rows.push_back({{"record_id", r.record_id},
                        {"term", r.term},
                        {"query_type", to_string(r.query_type)},
                        {"subcorpus", to_string(r.subcorpus)},
                        {"precision", s.precision},
                        {"recall", s.recall},
                        {"f1", s.f1},
                        {"degenerate", degenerate},
                        {"clamped", s.clamped}});
      }
      write_atomic(outputs[mi], jsonl(rows));
    }
    write_stamp("score", hash);
    record("score", true);
  } catch (const std::exception& e) {
    throw PipelineError("score", e.what());
  }
}

void Pipeline::step_correlate() {
  prepare();
  try {
    const auto freq_path = out() / "scores" / "term_freqs.jsonl";
    std::string inputs = digest(freq_path);
    for (const auto& m : config_.models) inputs += digest(out() / "scores" / m.name / "bertscore.jsonl");
    const auto output = out() / "correlations" / "quality_vs_frequency.json";
    std::vector<fs::path> outputs{output};
    if (config_.emit_scatter) {
      for (const auto& m : config_.models) outputs.push_back(out() / "correlations" / ("scatter_" + m.name + ".csv"));
    }
    const auto hash = hex64(fnv1a64(inputs + (config_.emit_scatter ? "S" : "")));
    if (up_to_date("correlate", hash, outputs)) {
      record("correlate", false);
      return;
    }

    std::unordered_map<std::string, std::uint64_t> freq;
    for (const auto& row : read_jsonl(freq_path)) {
      freq[row.at("term").get<std::string>()] = row.at("doc_freq").get<std::uint64_t>();
    }

    json cells = json::array();
    for (const auto& m : config_.models) {
      const auto scores = read_jsonl(out() / "scores" / m.name / "bertscore.jsonl");
      std::ostringstream scatter;
      scatter << "record_id,query_type,subcorpus,doc_freq,log10_doc_freq,f1\n";
      for (const auto& row : scores) {
        const auto key = join_tokens(normalize_text(row.at("term").get<std::string>()));
        const auto f = freq.contains(key) ? freq[key] : 0;
        if (f == 0) continue;
        const auto lf = log_freq(std::span(&f, 1)).values.front();
        scatter << row.at("record_id").get<std::string>() << ',' << row.at("query_type").get<std::string>()
                << ',' << row.at("subcorpus").get<std::string>() << ',' << f << ',' << format_double(lf)
                << ',' << format_double(row.at("f1").get<double>()) << '\n';
      }
      if (config_.emit_scatter) {
        write_atomic(out() / "correlations" / ("scatter_" + m.name + ".csv"), scatter.str());
      }

      for (auto type : kQueryTypes) {
        for (const char* sub : kSubcorpusLabels) {
          std::vector<std::uint64_t> freqs;
          std::vector<double> f1;
          std::size_t degenerate = 0;
          for (const auto& row : scores) {
            if (row.at("query_type").get<std::string>() != to_string(type)) continue;
            const auto sc = row.at("subcorpus").get<std::string>();
            if (std::string(sub) != kFull && sc != sub) continue;
            const auto key = join_tokens(normalize_text(row.at("term").get<std::string>()));
            freqs.push_back(freq.contains(key) ? freq[key] : 0);
            f1.push_back(row.at("f1").get<double>());
            if (row.at("degenerate").get<bool>() && freqs.back() > 0) ++degenerate;
          }
          const auto logged = log_freq(freqs);
          std::vector<Sample> samples;
          for (std::size_t k = 0; k < logged.kept_indices.size(); ++k) {
            samples.push_back({logged.values[k], f1[logged.kept_indices[k]]});
          }
          cells.push_back(to_json(correlate(m.name, std::string(to_string(type)), sub, samples,
                                            freqs.size() - samples.size(), degenerate,
                                            "log10_doc_freq", "bertscore_f1")));
        }
      }
    }
    write_atomic(output, cells.dump(2) + "\n");
    write_stamp("correlate", hash);
    record("correlate", true);
  } catch (const std::exception& e) {
    throw PipelineError("correlate", e.what());
  }
}

void Pipeline::step_cooccurrence() {
  prepare();
  try {
    const auto freq_path = out() / "scores" / "term_freqs.jsonl";
    const auto& q = config_.quotas;
    std::string inputs = digest(freq_path) + digest(config_.dataset) + index_digest() +
                         embedding().descriptor().name + std::to_string(embedding().descriptor().dim);
    inputs += json{config_.ngram_min, config_.ngram_max, config_.top_k, to_string(config_.selection_metric),
                   q.head_ex, q.head_gp, q.tail_ex, q.tail_gp, config_.trace_limit,
                   config_.truncate_first_sentence}
                  .dump();
    const auto sel_json = out() / "scores" / "headtail_selection.json";
    const auto sel_csv = out() / "scores" / "headtail_selection.csv";
    const auto traces = out() / "scores" / "traces.jsonl";
    const auto output = out() / "correlations" / "similarity_vs_cooccurrence.json";
    std::vector<fs::path> outputs{sel_json, sel_csv, traces, output};
    for (const auto& m : config_.models) {
      inputs += digest(out() / "answers" / m.name / "answers.jsonl");
      outputs.push_back(out() / "scores" / m.name / "ngrams.jsonl");
    }
    const auto hash = hex64(fnv1a64(inputs));
    if (up_to_date("cooccurrence", hash, outputs)) {
      record("cooccurrence", false);
      return;
    }

    std::vector<TermFrequencyRecord> ranked;
    for (const auto& row : read_jsonl(freq_path)) {
      ranked.push_back({Phrase::from_text(row.at("term").get<std::string>()),
                        row.at("raw_term").get<std::string>(), row.at("doc_freq").get<std::uint64_t>(),
                        parse_subcorpus(row.at("subcorpus").get<std::string>()).value()});
    }
    const auto sel = select_head_tail(ranked, config_.quotas);
    write_atomic(sel_json, to_json(sel).dump(2) + "\n");
    {
      std::ostringstream csv;
      write_selection_csv(csv, sel);
      write_atomic(sel_csv, csv.str());
    }

    const auto& idx = index();
    struct Selected {
      const TermFrequencyRecord* term;
      const char* set;
    };
    std::vector<Selected> selected;
    for (const auto& t : sel.head) selected.push_back({&t, "head"});
    for (const auto& t : sel.tail) selected.push_back({&t, "tail"});

    std::vector<json> trace_rows;
    for (const auto& s : selected) {
      const auto tr = trace_term(idx, s.term->term, config_.trace_limit);
      json docs = json::array();
      for (const auto& row : tr.rows) docs.push_back({{"doc_id", row.doc_id}, {"count", row.count}});
      trace_rows.push_back({{"term", s.term->term.text()}, {"set", s.set},
                            {"doc_freq", s.term->doc_freq}, {"documents", docs}});
    }
    write_atomic(traces, jsonl(trace_rows));

    // Records per normalized term, in dataset order.
    std::unordered_map<std::string, std::vector<const QARecord*>> by_term;
    for (const auto& r : records()) {
      const auto tokens = normalize_text(r.term);
      if (!tokens.empty()) by_term[join_tokens(tokens)].push_back(&r);
    }

    json cells = json::array();
    for (std::size_t mi = 0; mi < config_.models.size(); ++mi) {
      const auto& m = config_.models[mi];
      std::unordered_map<std::string, GeneratedAnswer> answers;
      for (auto& a : read_answers(out() / "answers" / m.name / "answers.jsonl")) {
        answers.emplace(a.record_id, std::move(a));
      }
      struct Point {
        std::string set;
        Subcorpus sub;
        double similarity;
        double co_prob;
      };
      std::vector<Point> points;
      std::vector<json> rows;
      for (const auto& s : selected) {
        const auto key = s.term->term.text();
        for (const auto* r : by_term[key]) {
          const auto it = answers.find(r->record_id);
          if (it == answers.end()) continue;
          const auto text = answer_text(it->second);
          if (trim(text).empty()) continue;
          const auto scored = term_ngram_similarity(s.term->raw_term, text, embedding(),
                                                    config_.ngram_min, config_.ngram_max,
                                                    config_.selection_metric);
          for (auto& top : top_k_ngrams(scored, config_.top_k)) {
            const auto co = cooccurrence_probability(idx, s.term->term, top.ngram.tokens);
            top.co_prob = co.value;
            points.push_back({s.set, s.term->subcorpus, top.similarity, co.value});
            rows.push_back({{"record_id", r->record_id},
                            {"term", key},
                            {"set", s.set},
                            {"subcorpus", to_string(s.term->subcorpus)},
                            {"ngram", top.ngram.text()},
                            {"n", top.ngram.n()},
                            {"start", top.ngram.start},
                            {"similarity", top.similarity},
                            {"co_prob", co.value},
                            {"numerator", co.numerator},
                            {"denominator", co.denominator}});
          }
        }
      }
      write_atomic(outputs[4 + mi], jsonl(rows));

      for (const char* crit : kHeadTailLabels) {
        for (const char* sub : kSubcorpusLabels) {
          std::vector<Sample> samples;
          for (const auto& p : points) {
            if (std::string(crit) != "overall" && p.set != crit) continue;
            if (!in_subcorpus(sub, p.sub)) continue;
            samples.push_back({p.similarity, p.co_prob});
          }
          cells.push_back(to_json(correlate(m.name, crit, sub, samples, 0, 0, "ngram_similarity",
                                            "cooccurrence_probability")));
        }
      }
    }
    write_atomic(output, cells.dump(2) + "\n");
    write_stamp("cooccurrence", hash);
    record("cooccurrence", true);
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError("cooccurrence", e.what());
  }
}

CorrelationReport Pipeline::report() {
  prepare();
  try {
    CorrelationReport rep;
    for (const auto& c : json::parse(read_file(out() / "correlations" / "quality_vs_frequency.json"))) {
      rep.quality_vs_frequency.push_back(cell_from_json(c));
    }
    for (const auto& c :
         json::parse(read_file(out() / "correlations" / "similarity_vs_cooccurrence.json"))) {
      rep.similarity_vs_cooccurrence.push_back(cell_from_json(c));
    }
    const auto summary = json::parse(read_file(out() / "index" / "summary.json"));
    auto& p = rep.provenance;
    p.config_hash = config_.hash();
    p.normalization = summary.at("normalization").get<std::string>();
    p.corpus_documents = summary.at("doc_count").get<std::uint64_t>();
    p.dataset_records = records().size();
    p.embedding = embedding().descriptor();
    for (const auto& m : config_.models) p.models.push_back({m.name, m.kind, m.max_tokens, m.temperature});
    p.answer_metric = std::string(kBertScoreMetric);
    p.ngram_selection_metric = std::string(to_string(config_.selection_metric));
    p.ngram_min = config_.ngram_min;
    p.ngram_max = config_.ngram_max;
    p.top_k = config_.top_k;
    p.seed = config_.seed;
    return rep;
  } catch (const std::exception& e) {
    throw PipelineError("report", e.what());
  }
}

std::vector<fs::path> Pipeline::emit(const std::set<ReportFormat>& formats) {
  const auto rep = report();
  try {
    return emit_report(rep, out(), formats);
  } catch (const std::exception& e) {
    throw PipelineError("report", e.what());
  }
}

RunStatus Pipeline::run() {
  const auto started = now_utc();
  prepare();
  index();
  const auto status = step_generate();
  step_frequency();
  step_score();
  step_correlate();
  step_cooccurrence();
  emit();

  json steps = json::array();
  for (const auto& s : steps_) steps.push_back({{"step", s.step}, {"ran", s.ran}});
  json models = json::array();
  for (const auto& m : config_.models) models.push_back(m.name);
  const auto desc = embedding().descriptor();
  write_atomic(out() / "run_manifest.json",
               json{{"config", config_.to_json()},
                    {"config_hash", config_.hash()},
                    {"embedding_backend",
                     {{"name", desc.name}, {"dim", desc.dim}, {"deterministic", desc.deterministic}}},
                    {"models", models},
                    {"seed", config_.seed},
                    {"status", status == RunStatus::kOk ? "ok" : "partial"},
                    {"steps", steps},
                    {"started_at", started},
                    {"finished_at", now_utc()}}
                       .dump(2) + "\n");
  return status;
}

PipelineResult run_pipeline(const RunConfig& config, PipelineBackends backends) {
  Pipeline p(config, std::move(backends));
  PipelineResult res;
  res.status = p.run();
  res.report = p.report();
  res.steps = p.steps();
  return res;
}

}  // namespace tracklist
