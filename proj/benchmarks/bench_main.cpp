#include <benchmark/benchmark.h>

#include "ironclad/block_tree.hpp"
#include "ironclad/charstring.hpp"
#include "ironclad/rng.hpp"
#include "ironclad/semi_markov.hpp"
#include "ironclad/simulator.hpp"
#include "ironclad/walk.hpp"

namespace {

using namespace ironclad;

ProtocolParams desk_params() {
  ProtocolParams p;
  p.p = 0.5;
  p.rho = 0.0;
  p.delta = 1;
  p.q = 0.5;
  p.theta = 2.0;
  return p;
}

void BM_SampleString(benchmark::State& state) {
  const DerivedRates rates = derive_rates(desk_params());
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_string(rates, 100'000, 42));
  }
  state.SetItemsProcessed(state.iterations() * 100'000);
}
BENCHMARK(BM_SampleString);

void BM_EmpiricalAlpha(benchmark::State& state) {
  const ProtocolParams params = desk_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(empirical_alpha_sampled(params, 1'000'000, 7));
  }
  state.SetItemsProcessed(state.iterations() * 1'000'000);
}
BENCHMARK(BM_EmpiricalAlpha);

void BM_EmbeddedChain(benchmark::State& state) {
  const DerivedRates rates = derive_rates(desk_params());
  for (auto _ : state) {
    benchmark::DoNotOptimize(embedded_chain(rates, 1));
  }
}
BENCHMARK(BM_EmbeddedChain);

void BM_WalkRuns(benchmark::State& state) {
  WalkConfig cfg;
  cfg.gamma = 0.5;
  cfg.threshold = 2.0;
  cfg.runs = static_cast<uint64_t>(state.range(0));
  cfg.theta = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_walks(cfg));
  }
  state.SetItemsProcessed(state.iterations() * cfg.runs);
}
BENCHMARK(BM_WalkRuns)->Arg(10'000)->Arg(100'000);

void BM_TreeInsertHeaviest(benchmark::State& state) {
  for (auto _ : state) {
    BlockTree tree(WeightRatio::from_theta(2.5));
    Rng rng(1);
    BlockId tip = kGenesisId;
    for (uint64_t i = 1; i <= 10'000; ++i) {
      const BlockId parent = rng.bernoulli(0.2)
                                 ? static_cast<BlockId>(rng.next_below(tree.size()))
                                 : tip;
      tip = tree.add_block(parent, tree.block(parent).label + 1 + rng.next_below(3), true,
                           rng.bernoulli(0.1));
    }
    benchmark::DoNotOptimize(tree.heaviest_chain(TieBreak::FirstSeen));
  }
}
BENCHMARK(BM_TreeInsertHeaviest);

void BM_Simulation(benchmark::State& state) {
  SimConfig cfg;
  cfg.params.p = 1e-4;
  cfg.params.rho = 0.25;
  cfg.params.delta = 10'000;
  cfg.params.q = 0.03;
  cfg.params.theta = 500.0;
  cfg.miners = 50;
  cfg.horizon_blocks = static_cast<uint64_t>(state.range(0));
  cfg.strategy = AdversaryStrategy::ConvergencePrevention;
  cfg.seed = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_simulation(cfg));
  }
  state.SetItemsProcessed(state.iterations() * cfg.horizon_blocks);
}
BENCHMARK(BM_Simulation)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
