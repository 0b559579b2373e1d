#include <benchmark/benchmark.h>

#include "stablecos/cos_engine.hpp"
#include "stablecos/harness.hpp"
#include "stablecos/presets.hpp"

using namespace stablecos;

namespace {

CosConfig reference_config(const Profile& p, int n) {
  CosConfig cfg = p.config(CosVariant::Stable);
  cfg.n_terms = n;
  return cfg;
}

void BM_SerialPrice(benchmark::State& state) {
  const Profile& p = profile("cgmy1");
  const CosConfig cfg = reference_config(p, static_cast<int>(state.range(0)));
  const OptionSpec call(100.0, OptionKind::Call);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::price(p.model, p.market, call, cfg).price);
  }
}

void BM_ParallelPrice(benchmark::State& state) {
  const Profile& p = profile("cgmy1");
  const CosConfig cfg = reference_config(p, static_cast<int>(state.range(0)));
  const OptionSpec call(100.0, OptionKind::Call);
  for (auto _ : state) {
    benchmark::DoNotOptimize(price(p.model, p.market, call, cfg).price);
  }
}

void BM_StrikeBatch(benchmark::State& state) {
  const Profile& p = profile("heston");
  const auto strikes = table_strikes();
  const CosConfig cfg = p.config(CosVariant::Stable);
  for (auto _ : state) {
    benchmark::DoNotOptimize(price_strikes(p.model, p.market, strikes, OptionKind::Call, cfg));
  }
}

void BM_ReferenceRecompute(benchmark::State& state) {
  const Profile& p = profile("kou");
  for (auto _ : state) benchmark::DoNotOptimize(recompute_reference(p, p.market));
}

}  // namespace

BENCHMARK(BM_SerialPrice)->Arg(128)->Arg(4096)->Arg(60000);
BENCHMARK(BM_ParallelPrice)->Arg(128)->Arg(4096)->Arg(60000);
BENCHMARK(BM_StrikeBatch);
BENCHMARK(BM_ReferenceRecompute);

BENCHMARK_MAIN();
