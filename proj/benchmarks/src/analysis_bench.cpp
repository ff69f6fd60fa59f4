#include <benchmark/benchmark.h>

#include "cobra/assist/demo.hpp"

namespace {

void BM_DemoAnalyze(benchmark::State& state) {
  cobra::Text text;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    text += U"val x = (1 + f(y)) // comment\nlet s = \"str\" in [a, (b]\n";
  }
  const auto& demo = *cobra::snippets::find_language("demo");
  for (auto _ : state) benchmark::DoNotOptimize(cobra::assist::demo_analyze(text, demo));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size() * sizeof(char32_t)));
}
BENCHMARK(BM_DemoAnalyze)->Range(1, 4096);

}  // namespace
