#include "pixvem/agglomeration.hpp"
#include "pixvem/condensation.hpp"
#include "pixvem/study.hpp"

#include <benchmark/benchmark.h>

using namespace pixvem;

namespace {

const ManufacturedCase& disk_case() {
  static const ManufacturedCase c = case_by_name("test1a");
  return c;
}

void BM_Agglomerate(benchmark::State& state) {
  const PixelGrid grid = classify_pixels(disk_case().domain, 1.0 / 128);
  for (auto _ : state) benchmark::DoNotOptimize(agglomerate_uniform(grid, 4));
}
BENCHMARK(BM_Agglomerate)->Unit(benchmark::kMillisecond);

void BM_Projectors(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const PolyMesh mesh = agglomerate_uniform(classify_pixels(disk_case().domain, 1.0 / 64), 4);
  const DofMap dofs = build_dof_map(mesh, k);
  for (auto _ : state) benchmark::DoNotOptimize(build_all_projectors(mesh, dofs));
}
BENCHMARK(BM_Projectors)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_AssembleCondenseSolve(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const PolyMesh mesh = agglomerate_uniform(classify_pixels(disk_case().domain, 1.0 / 64), 4);
  BdtConfig cfg;
  cfg.k = k;
  for (auto _ : state) benchmark::DoNotOptimize(solve_vem(mesh, disk_case(), cfg, true));
}
BENCHMARK(BM_AssembleCondenseSolve)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Fem(benchmark::State& state) {
  const PixelGrid grid = classify_pixels(disk_case().domain, 1.0 / 64);
  FemConfig fc;
  fc.k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fem_solve(grid, disk_case(), fc));
}
BENCHMARK(BM_Fem)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
