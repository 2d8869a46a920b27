#pragma once

#include <cstdint>
#include <cstddef>
#include <iosfwd>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tracklist/text.hpp"

namespace tracklist {

struct DocumentRecord {
  std::string doc_id;
  std::string text;
};

// One document matched by a phrase query, with the number of (possibly
// overlapping) start positions at which the phrase occurs.
struct PhraseHit {
  std::string_view doc_id;
  std::uint32_t count = 0;
};

// Immutable positional inverted index answering document-frequency queries.
// Documents are numbered by ascending doc_id, so every result list comes out
// in doc_id order. Safe for concurrent readers.
class DocFreqIndex {
 public:
  DocFreqIndex() = default;
  DocFreqIndex(const DocFreqIndex& other);
  DocFreqIndex& operator=(const DocFreqIndex& other);
  DocFreqIndex(DocFreqIndex&&) noexcept = default;
  DocFreqIndex& operator=(DocFreqIndex&&) noexcept = default;

  std::uint64_t doc_count() const noexcept { return doc_ids_.size(); }
  std::size_t vocabulary_size() const noexcept { return vocab_.size(); }
  const std::string& normalization() const noexcept { return normalization_; }
  const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }

  // Documents containing `phrase` as a contiguous token run at least once.
  std::uint64_t doc_freq(const Phrase& phrase) const;
  std::uint64_t doc_freq(std::string_view raw) const { return doc_freq(Phrase::from_text(raw)); }

  // Documents containing both phrases anywhere, in either order.
  std::uint64_t co_doc_freq(const Phrase& a, const Phrase& b) const;

  // First `limit` containing doc_ids in ascending order. limit must be >= 1.
  std::vector<std::string> containing_docs(const Phrase& phrase, std::size_t limit) const;

  // Containing documents with per-document occurrence counts, up to `limit`.
  std::vector<PhraseHit> hits(const Phrase& phrase, std::size_t limit = SIZE_MAX) const;

  // Single-file binary persistence. Identical indexes serialize to identical
  // bytes.
  void save(const std::filesystem::path& path) const;
  static DocFreqIndex load(const std::filesystem::path& path);
  void write(std::ostream& out) const;
  static DocFreqIndex read(std::istream& in);

 private:
  friend class IndexBuilder;

  struct Postings {
    std::vector<std::uint32_t> docs;       // ascending doc ordinals
    std::vector<std::uint32_t> offsets;    // size docs+1, into positions
    std::vector<std::uint32_t> positions;  // ascending within each doc
  };

  struct Match {
    std::uint32_t doc;
    std::uint32_t count;
  };

  // Exact phrase matches, in doc order, stopping after `limit` documents.
  std::vector<Match> match(const Phrase& phrase, std::size_t limit) const;
  const Postings* postings_for(const std::string& token) const;
  void rebuild_lookup();

  std::string normalization_;
  std::vector<std::string> doc_ids_;
  std::vector<std::string> vocab_;  // sorted
  std::vector<Postings> postings_;  // parallel to vocab_
  std::unordered_map<std::string_view, std::uint32_t> lookup_;
};

// Accumulates documents and produces a DocFreqIndex. Documents may arrive in
// any order; the finished index does not depend on arrival order.
class IndexBuilder {
 public:
  // Threads used by add_batch for normalization; 0 picks hardware concurrency.
  explicit IndexBuilder(unsigned threads = 1);

  // Throws BuildError naming the id on duplicates or an empty id.
  void add(DocumentRecord doc);
  void add_batch(std::span<const DocumentRecord> docs);

  std::size_t size() const noexcept { return docs_.size(); }

  // Consumes the builder.
  DocFreqIndex finish() &&;

 private:
  struct PendingDoc {
    std::string doc_id;
    std::vector<std::uint32_t> tokens;
  };
  void append(std::string doc_id, const std::vector<std::string>& tokens);

  unsigned threads_;
  std::vector<PendingDoc> docs_;
  std::unordered_set<std::string> seen_ids_;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::uint32_t> vocab_ids_;
};

DocFreqIndex build_index(std::span<const DocumentRecord> corpus, unsigned threads = 1);

// Corpus readers. JSONL: one {"doc_id": ..., "text": ...} object per line,
// blank lines skipped. Errors carry the 1-based line number. Directory: every
// regular file is one document whose doc_id is the file name.
using DocumentVisitor = std::function<void(DocumentRecord&&)>;
void read_jsonl_corpus(std::istream& in, const DocumentVisitor& visit);
void read_jsonl_corpus(const std::filesystem::path& path, const DocumentVisitor& visit);
void read_directory_corpus(const std::filesystem::path& dir, const DocumentVisitor& visit);

// Dispatches on the path: directories use the directory loader, files JSONL.
DocFreqIndex build_index_from_path(const std::filesystem::path& path, unsigned threads = 1);

}  // namespace tracklist
