#include <benchmark/benchmark.h>

#include <random>

#include "tracklist/corpus_index.hpp"
#include "tracklist/embedding.hpp"
#include "tracklist/similarity.hpp"
#include "tracklist/stats.hpp"

using namespace tracklist;

namespace {

std::vector<DocumentRecord> synthetic_corpus(std::size_t docs, std::size_t tokens, std::size_t vocab) {
  std::mt19937_64 rng(1);
  // Zipf-like draw so a few words dominate, as in real text.
  std::vector<double> w(vocab);
  for (std::size_t i = 0; i < vocab; ++i) w[i] = 1.0 / static_cast<double>(i + 1);
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  std::vector<DocumentRecord> out;
  for (std::size_t d = 0; d < docs; ++d) {
    std::string text;
    for (std::size_t t = 0; t < tokens; ++t) text += "w" + std::to_string(pick(rng)) + ' ';
    out.push_back({"doc" + std::to_string(d), std::move(text)});
  }
  return out;
}

void BM_BuildIndex(benchmark::State& state) {
  const auto docs = synthetic_corpus(static_cast<std::size_t>(state.range(0)), 100, 5000);
  for (auto _ : state) benchmark::DoNotOptimize(build_index(docs, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildIndex)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_PhraseQuery(benchmark::State& state) {
  const auto idx = build_index(synthetic_corpus(20000, 100, 5000));
  const auto phrase = Phrase::from_text(state.range(0) == 1 ? "w0" : "w0 w1 w2");
  for (auto _ : state) benchmark::DoNotOptimize(idx.doc_freq(phrase));
}
BENCHMARK(BM_PhraseQuery)->Arg(1)->Arg(3);

void BM_CoDocFreq(benchmark::State& state) {
  const auto idx = build_index(synthetic_corpus(20000, 100, 5000));
  const auto a = Phrase::from_text("w3 w4");
  const auto b = Phrase::from_text("w10");
  for (auto _ : state) benchmark::DoNotOptimize(idx.co_doc_freq(a, b));
}
BENCHMARK(BM_CoDocFreq);

void BM_BertScore(benchmark::State& state) {
  HashEmbeddingBackend backend;
  const std::string cand = "multiple sclerosis is a chronic disease of the central nervous system";
  const std::string ref = "a long lasting illness in which the immune system attacks the nerves";
  const auto c = backend.embed_tokens(cand);
  const auto r = backend.embed_tokens(ref);
  for (auto _ : state) benchmark::DoNotOptimize(bertscore(c, r, backend.descriptor()));
}
BENCHMARK(BM_BertScore);

void BM_Pearson(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  std::vector<double> x(static_cast<std::size_t>(state.range(0))), y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = g(rng);
    y[i] = x[i] + g(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(pearson(x, y));
}
BENCHMARK(BM_Pearson)->Arg(100)->Arg(6170);

}  // namespace
BENCHMARK_MAIN();
