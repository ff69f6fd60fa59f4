#include <benchmark/benchmark.h>

#include <random>

#include "cobra/sync/operation.hpp"

namespace {

using cobra::Text;
using cobra::sync::Operation;

Text make_text(std::size_t n) {
  Text t;
  for (std::size_t i = 0; i < n; ++i) t += static_cast<char32_t>(U'a' + i % 26);
  return t;
}

// A typing-like edit: a few scattered inserts and deletes.
Operation scattered_edit(std::mt19937_64& rng, std::size_t len, std::size_t edits) {
  Operation op;
  std::size_t at = 0;
  for (std::size_t i = 0; i < edits && at < len; ++i) {
    std::uniform_int_distribution<std::size_t> gap(0, (len - at) / (edits - i));
    const std::size_t skip = gap(rng);
    op.retain(skip);
    at += skip;
    if (rng() % 2 == 0) {
      op.insert(Text(U"xyz"));
    } else if (at < len) {
      op.erase(1);
      ++at;
    }
  }
  op.retain(len - at);
  return op;
}

void BM_Apply(benchmark::State& state) {
  const auto len = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  const Text text = make_text(len);
  const Operation op = scattered_edit(rng, len, 16);
  for (auto _ : state) benchmark::DoNotOptimize(cobra::sync::apply(text, op));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * len * sizeof(char32_t)));
}
BENCHMARK(BM_Apply)->Range(256, 64 << 10);

void BM_Transform(benchmark::State& state) {
  const auto len = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  const Operation a = scattered_edit(rng, len, 16);
  const Operation b = scattered_edit(rng, len, 16);
  for (auto _ : state) benchmark::DoNotOptimize(cobra::sync::transform(a, b));
}
BENCHMARK(BM_Transform)->Range(256, 64 << 10);

void BM_Compose(benchmark::State& state) {
  const auto len = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  const Operation a = scattered_edit(rng, len, 16);
  const Operation b = scattered_edit(rng, a.target_length(), 16);
  for (auto _ : state) benchmark::DoNotOptimize(cobra::sync::compose(a, b));
}
BENCHMARK(BM_Compose)->Range(256, 64 << 10);

}  // namespace
