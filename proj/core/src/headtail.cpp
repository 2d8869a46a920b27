#include "tracklist/headtail.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <unordered_map>

#include "tracklist/error.hpp"
#include "tracklist/log.hpp"

namespace tracklist {
namespace {

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

}  // namespace

std::vector<TermFrequencyRecord> rank_terms(const DocFreqIndex& index,
                                            std::span<const QARecord> records) {
  std::vector<TermFrequencyRecord> out;
  std::unordered_map<std::string, std::size_t> seen;  // normalized text -> out index
  for (const auto& r : records) {
    auto tokens = normalize_text(r.term);
    if (tokens.empty()) {
      log::warn("rank_terms: term '" + r.term + "' of record " + r.record_id +
                " has no word characters; skipped");
      continue;
    }
    Phrase phrase(std::move(tokens));
    const auto key = phrase.text();
    if (auto it = seen.find(key); it != seen.end()) {
      if (out[it->second].subcorpus != r.subcorpus) {
        log::info("rank_terms: term '" + key + "' appears in both subcorpora; keeping " +
                  std::string(to_string(out[it->second].subcorpus)));
      }
      continue;
    }
    seen.emplace(key, out.size());
    out.push_back({std::move(phrase), r.term, 0, r.subcorpus});
  }
  for (auto& t : out) t.doc_freq = index.doc_freq(t.term);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.doc_freq != b.doc_freq) return a.doc_freq > b.doc_freq;
    return a.term.tokens() < b.term.tokens();
  });
  return out;
}

SelectionQuotas SelectionQuotas::balanced(std::size_t n_head, std::size_t n_tail) {
  return {n_head - n_head / 2, n_head / 2, n_tail - n_tail / 2, n_tail / 2};
}

HeadTailSelection select_head_tail(std::span<const TermFrequencyRecord> ranked,
                                   const SelectionQuotas& quotas) {
  enum class Bucket { kExcluded, kHead, kTail, kUnselected };
  std::vector<Bucket> bucket(ranked.size(), Bucket::kUnselected);
  HeadTailSelection sel;

  for (auto sub : {Subcorpus::kEx, Subcorpus::kGp}) {
    std::vector<std::size_t> nonzero;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      if (ranked[i].subcorpus != sub) continue;
      if (ranked[i].doc_freq == 0) {
        bucket[i] = Bucket::kExcluded;
      } else {
        nonzero.push_back(i);
      }
    }
    const auto want_head = sub == Subcorpus::kEx ? quotas.head_ex : quotas.head_gp;
    const auto want_tail = sub == Subcorpus::kEx ? quotas.tail_ex : quotas.tail_gp;
    const auto n_head = std::min(want_head, nonzero.size());
    const auto n_tail = std::min(want_tail, nonzero.size() - n_head);
    for (std::size_t k = 0; k < n_head; ++k) bucket[nonzero[k]] = Bucket::kHead;
    for (std::size_t k = 0; k < n_tail; ++k) bucket[nonzero[nonzero.size() - 1 - k]] = Bucket::kTail;
    const std::string name(to_string(sub));
    if (n_head < want_head) {
      sel.warnings.push_back("head " + name + ": wanted " + std::to_string(want_head) +
                             ", only " + std::to_string(n_head) + " nonzero-frequency terms");
    }
    if (n_tail < want_tail) {
      sel.warnings.push_back("tail " + name + ": wanted " + std::to_string(want_tail) +
                             ", only " + std::to_string(n_tail) + " left after the head");
    }
  }

  for (std::size_t i = 0; i < ranked.size(); ++i) {
    switch (bucket[i]) {
      case Bucket::kExcluded: sel.excluded_zero.push_back(ranked[i].raw_term); break;
      case Bucket::kHead: sel.head.push_back(ranked[i]); break;
      case Bucket::kTail: sel.tail.push_back(ranked[i]); break;
      case Bucket::kUnselected: sel.unselected.push_back(ranked[i]); break;
    }
  }
  for (const auto& w : sel.warnings) log::warn("select_head_tail: " + w);
  return sel;
}

TraceResult trace_term(const DocFreqIndex& index, const Phrase& term, std::size_t limit) {
  if (limit == 0) throw ArgumentError("trace_term: limit must be >= 1");
  TraceResult res;
  for (const auto& h : index.hits(term, limit)) res.rows.push_back({std::string(h.doc_id), h.count});
  if (res.rows.empty()) res.notice = "term '" + term.text() + "' does not occur in the corpus";
  return res;
}

nlohmann::json to_json(const TermFrequencyRecord& r) {
  return {{"term", r.term.text()},
          {"raw_term", r.raw_term},
          {"doc_freq", r.doc_freq},
          {"subcorpus", to_string(r.subcorpus)}};
}

nlohmann::json to_json(const HeadTailSelection& s) {
  auto list = [](const std::vector<TermFrequencyRecord>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& r : v) a.push_back(to_json(r));
    return a;
  };
  return {{"head", list(s.head)},
          {"tail", list(s.tail)},
          {"unselected_count", s.unselected.size()},
          {"excluded_zero", s.excluded_zero},
          {"warnings", s.warnings}};
}

void write_selection_csv(std::ostream& out, const HeadTailSelection& s) {
  out << "set,subcorpus,term,raw_term,doc_freq\n";
  auto rows = [&](std::string_view set, const std::vector<TermFrequencyRecord>& v) {
    for (const auto& r : v) {
      out << set << ',' << to_string(r.subcorpus) << ',' << csv_cell(r.term.text()) << ','
          << csv_cell(r.raw_term) << ',' << r.doc_freq << '\n';
    }
  };
  rows("head", s.head);
  rows("tail", s.tail);
  for (const auto& t : s.excluded_zero) out << "excluded_zero,,," << csv_cell(t) << ",0\n";
}

}  // namespace tracklist
