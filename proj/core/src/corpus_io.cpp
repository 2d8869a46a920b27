#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tracklist/corpus_index.hpp"
#include "tracklist/error.hpp"

namespace tracklist {

void read_jsonl_corpus(std::istream& in, const DocumentVisitor& visit) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw BuildError("corpus record " + std::to_string(lineno) + " is not valid JSON: " + e.what());
    }
    if (!obj.is_object() || !obj.contains("doc_id") || !obj.contains("text") ||
        !obj["doc_id"].is_string() || !obj["text"].is_string()) {
      throw BuildError("corpus record " + std::to_string(lineno) +
                       " needs string fields 'doc_id' and 'text'");
    }
    visit(DocumentRecord{obj["doc_id"].get<std::string>(), obj["text"].get<std::string>()});
  }
  if (in.bad()) throw BuildError("read error after corpus record " + std::to_string(lineno));
}

void read_jsonl_corpus(const std::filesystem::path& path, const DocumentVisitor& visit) {
  std::ifstream in(path);
  if (!in) throw BuildError("cannot open corpus file: " + path.string());
  read_jsonl_corpus(in, visit);
}

void read_directory_corpus(const std::filesystem::path& dir, const DocumentVisitor& visit) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::size_t ordinal = 0;
  for (const auto& f : files) {
    ++ordinal;
    std::ifstream in(f, std::ios::binary);
    if (!in) throw BuildError("corpus record " + std::to_string(ordinal) + " unreadable: " + f.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    visit(DocumentRecord{f.filename().string(), ss.str()});
  }
}

DocFreqIndex build_index_from_path(const std::filesystem::path& path, unsigned threads) {
  constexpr std::size_t kBatch = 8192;
  IndexBuilder builder(threads);
  std::vector<DocumentRecord> batch;
  batch.reserve(kBatch);
  auto flush = [&] {
    builder.add_batch(batch);
    batch.clear();
  };
  auto visit = [&](DocumentRecord&& d) {
    batch.push_back(std::move(d));
    if (batch.size() == kBatch) flush();
  };
  if (std::filesystem::is_directory(path)) {
    read_directory_corpus(path, visit);
  } else {
    read_jsonl_corpus(path, visit);
  }
  flush();
  return std::move(builder).finish();
}

}  // namespace tracklist
