#include "tracklist/corpus_index.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <thread>

#include "tracklist/error.hpp"

namespace tracklist {
namespace {

constexpr std::array<char, 8> kMagic = {'T', 'L', 'D', 'F', 'I', 'D', 'X', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 8);
}

void put_str(std::ostream& out, std::string_view s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void put_u32s(std::ostream& out, const std::vector<std::uint32_t>& v) {
  put_u64(out, v.size());
  for (auto x : v) put_u32(out, x);
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void bytes(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw FormatError("index file truncated");
  }
  std::uint32_t u32() {
    unsigned char b[4];
    bytes(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  std::uint64_t u64() {
    unsigned char b[8];
    bytes(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  std::string str() {
    const auto n = u32();
    std::string s(n, '\0');
    if (n) bytes(s.data(), n);
    return s;
  }
  std::vector<std::uint32_t> u32s(std::uint64_t max) {
    const auto n = u64();
    if (n > max) throw FormatError("index file corrupt: array length out of range");
    std::vector<std::uint32_t> v(n);
    for (auto& x : v) x = u32();
    return v;
  }

 private:
  std::istream& in_;
};

bool contains_sorted(std::span<const std::uint32_t> v, std::uint32_t x) {
  return std::binary_search(v.begin(), v.end(), x);
}

}  // namespace

DocFreqIndex::DocFreqIndex(const DocFreqIndex& other)
    : normalization_(other.normalization_),
      doc_ids_(other.doc_ids_),
      vocab_(other.vocab_),
      postings_(other.postings_) {
  rebuild_lookup();
}

DocFreqIndex& DocFreqIndex::operator=(const DocFreqIndex& other) {
  if (this != &other) {
    DocFreqIndex copy(other);
    *this = std::move(copy);
  }
  return *this;
}

void DocFreqIndex::rebuild_lookup() {
  lookup_.clear();
  lookup_.reserve(vocab_.size());
  for (std::uint32_t i = 0; i < vocab_.size(); ++i) lookup_.emplace(vocab_[i], i);
}

const DocFreqIndex::Postings* DocFreqIndex::postings_for(const std::string& token) const {
  const auto it = lookup_.find(token);
  return it == lookup_.end() ? nullptr : &postings_[it->second];
}

std::vector<DocFreqIndex::Match> DocFreqIndex::match(const Phrase& phrase,
                                                     std::size_t limit) const {
  std::vector<Match> out;
  const auto& tokens = phrase.tokens();
  std::vector<const Postings*> lists;
  lists.reserve(tokens.size());
  for (const auto& t : tokens) {
    const auto* p = postings_for(t);
    if (p == nullptr) return out;
    lists.push_back(p);
  }

  const Postings& head = *lists.front();
  if (lists.size() == 1) {
    const auto n = std::min(limit, head.docs.size());
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back({head.docs[i], head.offsets[i + 1] - head.offsets[i]});
    }
    return out;
  }

  // Cursor per list; docs are ascending so each list is scanned once.
  std::vector<std::size_t> cursor(lists.size(), 0);
  for (std::size_t i = 0; i < head.docs.size() && out.size() < limit; ++i) {
    const std::uint32_t doc = head.docs[i];
    bool all = true;
    for (std::size_t k = 1; k < lists.size(); ++k) {
      const auto& docs = lists[k]->docs;
      auto it = std::lower_bound(docs.begin() + static_cast<std::ptrdiff_t>(cursor[k]), docs.end(), doc);
      cursor[k] = static_cast<std::size_t>(it - docs.begin());
      if (it == docs.end() || *it != doc) {
        all = false;
        if (it == docs.end()) i = head.docs.size();  // no later doc can match either
        break;
      }
    }
    if (!all) continue;

    const std::span<const std::uint32_t> first(head.positions.data() + head.offsets[i],
                                               head.offsets[i + 1] - head.offsets[i]);
    std::uint32_t count = 0;
    for (const std::uint32_t start : first) {
      bool ok = true;
      for (std::size_t k = 1; k < lists.size() && ok; ++k) {
        const Postings& p = *lists[k];
        const std::size_t j = cursor[k];
        const std::span<const std::uint32_t> pos(p.positions.data() + p.offsets[j],
                                                 p.offsets[j + 1] - p.offsets[j]);
        ok = contains_sorted(pos, start + static_cast<std::uint32_t>(k));
      }
      if (ok) ++count;
    }
    if (count > 0) out.push_back({doc, count});
  }
  return out;
}

std::uint64_t DocFreqIndex::doc_freq(const Phrase& phrase) const {
  if (phrase.size() == 1) {
    const auto* p = postings_for(phrase.tokens().front());
    return p ? p->docs.size() : 0;
  }
  return match(phrase, SIZE_MAX).size();
}

std::uint64_t DocFreqIndex::co_doc_freq(const Phrase& a, const Phrase& b) const {
  if (a == b) return doc_freq(a);
  const auto ma = match(a, SIZE_MAX);
  if (ma.empty()) return 0;
  const auto mb = match(b, SIZE_MAX);
  std::uint64_t n = 0;
  std::size_t i = 0, j = 0;
  while (i < ma.size() && j < mb.size()) {
    if (ma[i].doc < mb[j].doc) {
      ++i;
    } else if (mb[j].doc < ma[i].doc) {
      ++j;
    } else {
      ++n, ++i, ++j;
    }
  }
  return n;
}

std::vector<std::string> DocFreqIndex::containing_docs(const Phrase& phrase,
                                                       std::size_t limit) const {
  if (limit == 0) throw ArgumentError("containing_docs: limit must be >= 1");
  std::vector<std::string> ids;
  for (const auto& m : match(phrase, limit)) ids.push_back(doc_ids_[m.doc]);
  return ids;
}

std::vector<PhraseHit> DocFreqIndex::hits(const Phrase& phrase, std::size_t limit) const {
  std::vector<PhraseHit> out;
  for (const auto& m : match(phrase, limit)) out.push_back({doc_ids_[m.doc], m.count});
  return out;
}

void DocFreqIndex::write(std::ostream& out) const {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kFormatVersion);
  put_str(out, normalization_);
  put_u64(out, doc_ids_.size());
  for (const auto& id : doc_ids_) put_str(out, id);
  put_u64(out, vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    put_str(out, vocab_[i]);
    put_u32s(out, postings_[i].docs);
    put_u32s(out, postings_[i].offsets);
    put_u32s(out, postings_[i].positions);
  }
}

DocFreqIndex DocFreqIndex::read(std::istream& in) {
  Reader r(in);
  std::array<char, 8> magic{};
  r.bytes(magic.data(), magic.size());
  if (magic != kMagic) throw FormatError("not a tracklist index file (bad magic)");
  const auto version = r.u32();
  if (version != kFormatVersion) {
    throw FormatError("unsupported index format version " + std::to_string(version));
  }
  DocFreqIndex idx;
  idx.normalization_ = r.str();
  if (idx.normalization_ != kNormalizationVersion) {
    throw FormatError("index was built with normalization '" + idx.normalization_ +
                      "', this build uses '" + std::string(kNormalizationVersion) + "'");
  }
  const auto ndocs = r.u64();
  if (ndocs > UINT32_MAX) throw FormatError("index file corrupt: doc count");
  idx.doc_ids_.reserve(ndocs);
  for (std::uint64_t i = 0; i < ndocs; ++i) idx.doc_ids_.push_back(r.str());
  const auto nvocab = r.u64();
  if (nvocab > UINT32_MAX) throw FormatError("index file corrupt: vocabulary size");
  idx.vocab_.reserve(nvocab);
  idx.postings_.reserve(nvocab);
  for (std::uint64_t i = 0; i < nvocab; ++i) {
    idx.vocab_.push_back(r.str());
    Postings p;
    p.docs = r.u32s(ndocs);
    p.offsets = r.u32s(ndocs + 1);
    p.positions = r.u32s(UINT32_MAX);
    if (p.offsets.size() != p.docs.size() + 1 || p.offsets.back() != p.positions.size()) {
      throw FormatError("index file corrupt: postings of '" + idx.vocab_.back() + "'");
    }
    for (auto d : p.docs) {
      if (d >= ndocs) throw FormatError("index file corrupt: doc ordinal out of range");
    }
    idx.postings_.push_back(std::move(p));
  }
  idx.rebuild_lookup();
  return idx;
}

void DocFreqIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open index file for writing: " + path.string());
  write(out);
  out.flush();
  if (!out) throw Error("failed writing index file: " + path.string());
}

DocFreqIndex DocFreqIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open index file: " + path.string());
  return read(in);
}

IndexBuilder::IndexBuilder(unsigned threads)
    : threads_(threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads) {}

void IndexBuilder::append(std::string doc_id, const std::vector<std::string>& tokens) {
  if (doc_id.empty()) {
    throw BuildError("document " + std::to_string(docs_.size() + 1) + " has an empty doc_id");
  }
  if (!seen_ids_.insert(doc_id).second) throw BuildError("duplicate doc_id: " + doc_id);
  if (tokens.size() > UINT32_MAX) throw BuildError("document too long: " + doc_id);
  PendingDoc doc{std::move(doc_id), {}};
  doc.tokens.reserve(tokens.size());
  for (const auto& t : tokens) {
    auto [it, inserted] = vocab_ids_.try_emplace(t, static_cast<std::uint32_t>(vocab_.size()));
    if (inserted) vocab_.push_back(t);
    doc.tokens.push_back(it->second);
  }
  docs_.push_back(std::move(doc));
}

void IndexBuilder::add(DocumentRecord doc) {
  append(std::move(doc.doc_id), normalize_text(doc.text));
}

void IndexBuilder::add_batch(std::span<const DocumentRecord> docs) {
  std::vector<std::vector<std::string>> normalized(docs.size());
  const unsigned workers = std::min<std::size_t>(threads_, std::max<std::size_t>(1, docs.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < docs.size(); ++i) normalized[i] = normalize_text(docs[i].text);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < docs.size(); i += workers) {
          normalized[i] = normalize_text(docs[i].text);
        }
      });
    }
  }
  // Vocabulary ids and duplicate checks stay sequential, in input order.
  for (std::size_t i = 0; i < docs.size(); ++i) append(docs[i].doc_id, normalized[i]);
}

DocFreqIndex IndexBuilder::finish() && {
  DocFreqIndex idx;
  idx.normalization_ = std::string(kNormalizationVersion);

  // Sorted vocabulary, remapped from insertion ids.
  std::vector<std::uint32_t> order(vocab_.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return vocab_[a] < vocab_[b]; });
  std::vector<std::uint32_t> remap(vocab_.size());
  idx.vocab_.reserve(vocab_.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) {
    remap[order[i]] = i;
    idx.vocab_.push_back(std::move(vocab_[order[i]]));
  }

  std::sort(docs_.begin(), docs_.end(),
            [](const PendingDoc& a, const PendingDoc& b) { return a.doc_id < b.doc_id; });

  idx.postings_.resize(idx.vocab_.size());
  for (auto& p : idx.postings_) p.offsets.push_back(0);
  idx.doc_ids_.reserve(docs_.size());
  for (std::uint32_t d = 0; d < docs_.size(); ++d) {
    auto& doc = docs_[d];
    for (std::uint32_t pos = 0; pos < doc.tokens.size(); ++pos) {
      auto& p = idx.postings_[remap[doc.tokens[pos]]];
      if (p.docs.empty() || p.docs.back() != d) {
        if (!p.docs.empty()) p.offsets.push_back(static_cast<std::uint32_t>(p.positions.size()));
        p.docs.push_back(d);
      }
      p.positions.push_back(pos);
    }
    idx.doc_ids_.push_back(std::move(doc.doc_id));
    doc.tokens = {};
  }
  for (auto& p : idx.postings_) {
    if (!p.docs.empty()) p.offsets.push_back(static_cast<std::uint32_t>(p.positions.size()));
  }
  idx.rebuild_lookup();
  docs_.clear();
  seen_ids_.clear();
  vocab_ids_.clear();
  vocab_.clear();
  return idx;
}

DocFreqIndex build_index(std::span<const DocumentRecord> corpus, unsigned threads) {
  IndexBuilder builder(threads);
  builder.add_batch(corpus);
  return std::move(builder).finish();
}

}  // namespace tracklist
