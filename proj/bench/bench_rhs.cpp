// Serial reference vs OpenMP collision rhs, and kernel table construction.
//
//   wavecascade_bench --benchmark_filter=Rhs

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "wavecascade/collision_rhs.hpp"
#include "wavecascade/kernel_table.hpp"

using namespace wavecascade;

namespace {

struct Fixture {
  OmegaGrid grid;
  KernelTable table;
  std::vector<double> g;
};

const Fixture& fixture(std::size_t n) {
  static std::vector<std::pair<std::size_t, Fixture>> cache;
  for (const auto& [k, f] : cache) {
    if (k == n) return f;
  }
  auto grid = OmegaGrid::from_max(DispersionRelation::power_law(1.5), n, 1.0);
  auto table = KernelTable::build(KernelWeights(), grid);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> g(n);
  for (auto& x : g) x = u(rng);
  cache.emplace_back(n, Fixture{grid, std::move(table), std::move(g)});
  return cache.back().second;
}

void BM_RhsReference(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(f.g.size());
  for (auto _ : state) {
    collision_rhs_reference(f.table, f.g, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["entries"] = static_cast<double>(f.table.size());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.table.size()));
}

void BM_RhsParallel(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(f.g.size());
  const ParallelOptions opt{64, static_cast<int>(state.range(1))};
  for (auto _ : state) {
    collision_rhs_parallel(f.table, f.g, out, opt);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.table.size()));
}

void BM_KernelBuild(benchmark::State& state) {
  const auto grid =
      OmegaGrid::from_max(DispersionRelation::power_law(1.5), static_cast<std::size_t>(state.range(0)), 1.0);
  for (auto _ : state) {
    auto table = KernelTable::build(KernelWeights(), grid);
    benchmark::DoNotOptimize(table.size());
  }
}

}  // namespace

BENCHMARK(BM_RhsReference)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RhsParallel)
    ->ArgsProduct({{64, 128, 256}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMicrosecond)
    ->UseRealTime();
BENCHMARK(BM_KernelBuild)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
