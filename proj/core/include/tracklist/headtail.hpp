#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tracklist/corpus_index.hpp"
#include "tracklist/qa_harness.hpp"

namespace tracklist {

struct TermFrequencyRecord {
  Phrase term;
  std::string raw_term;
  std::uint64_t doc_freq = 0;
  Subcorpus subcorpus = Subcorpus::kEx;
};

// One record per unique normalized term, by doc_freq descending then term
// text ascending. A term seen in both subcorpora keeps the subcorpus of its
// first occurrence; terms with no word characters are skipped. Both events are
// logged.
std::vector<TermFrequencyRecord> rank_terms(const DocFreqIndex& index,
                                            std::span<const QARecord> records);

// Quotas per (head/tail x subcorpus) quadrant.
struct SelectionQuotas {
  std::size_t head_ex = 25;
  std::size_t head_gp = 25;
  std::size_t tail_ex = 25;
  std::size_t tail_gp = 25;

  // Splits each total evenly across EX and GP; an odd remainder goes to EX.
  static SelectionQuotas balanced(std::size_t n_head, std::size_t n_tail);
};

struct HeadTailSelection {
  std::vector<TermFrequencyRecord> head;
  std::vector<TermFrequencyRecord> tail;
  std::vector<TermFrequencyRecord> unselected;  // nonzero terms in neither set
  std::vector<std::string> excluded_zero;       // raw terms with doc_freq 0
  std::vector<std::string> warnings;            // quota shortfalls
};

// Within each subcorpus the head takes the highest-frequency nonzero terms and
// the tail the lowest-frequency nonzero terms not already in the head.
// Shortfalls are reported in `warnings`, never padded. Lists keep the
// rank_terms order.
HeadTailSelection select_head_tail(std::span<const TermFrequencyRecord> ranked,
                                   const SelectionQuotas& quotas = {});

struct TraceRow {
  std::string doc_id;
  std::uint32_t count = 0;  // occurrences of the term in that document
};

struct TraceResult {
  std::vector<TraceRow> rows;
  std::optional<std::string> notice;  // set when the term is absent
};

TraceResult trace_term(const DocFreqIndex& index, const Phrase& term, std::size_t limit = 100);

nlohmann::json to_json(const TermFrequencyRecord& r);
nlohmann::json to_json(const HeadTailSelection& s);
// Columns: set,subcorpus,term,raw_term,doc_freq. Excluded terms appear with
// set=excluded_zero.
void write_selection_csv(std::ostream& out, const HeadTailSelection& s);

}  // namespace tracklist
