#include <benchmark/benchmark.h>

#include "content.hpp"
#include "sxgame/evaluator.hpp"

using namespace sxgame;

namespace {

const char* kTarget = "Larger or charged particles, like glucose and sodium ions, cannot cross the lipid layers on their own.";
const char* kPrior =
    "Every living cell is surrounded by a thin membrane. The membrane is built from two layers of lipid molecules.";
const char* kSe =
    "Glucose is big and ions carry charge, so the oily middle of the membrane pushes them away and the cell needs "
    "protein doors to let them in.";

}  // namespace

static void BM_WordEvaluator(benchmark::State& state) {
  const Evaluator eval(Tokenizer(bench_content()->stopwords()), ScoringConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(eval.evaluate(kSe, kTarget, kPrior));
}
BENCHMARK(BM_WordEvaluator);

static void BM_ContentWords(benchmark::State& state) {
  const Tokenizer tok(bench_content()->stopwords());
  for (auto _ : state) benchmark::DoNotOptimize(tok.content_words(kPrior));
}
BENCHMARK(BM_ContentWords);
