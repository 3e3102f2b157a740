#include <benchmark/benchmark.h>

#include <random>

#include "dgprobe/analysis.hpp"

using namespace dgprobe;

namespace {

ComplexMatrix random_hermitian(std::size_t n) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = g(rng);
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = cplx(g(rng), g(rng));
      a(j, i) = std::conj(a(i, j));
    }
  }
  return a;
}

void BM_EigHermitian(benchmark::State& state) {
  const ComplexMatrix a = random_hermitian(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eig_hermitian(a));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EigHermitian)->RangeMultiplier(2)->Range(4, 128)->Unit(benchmark::kMicrosecond)->Complexity();

void BM_LkExactWeyl(benchmark::State& state) {
  const auto model = weyl_bloch({});
  const ComplexMatrix h = model.hamiltonian({0.3, -0.7, 1.1});
  for (auto _ : state) benchmark::DoNotOptimize(lk_exact(h, model.v, 0.5, 20.0));
}
BENCHMARK(BM_LkExactWeyl);

void BM_ClosedForm(benchmark::State& state) {
  const FourVector r = qwz_bloch(-1.0).at({0.4, 1.2, 0});
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lk_closed_form(r, 0.1, t));
    t += 0.01;
  }
}
BENCHMARK(BM_ClosedForm);

void BM_ProductSeriesQwz(benchmark::State& state) {
  const auto grid = MomentumGrid::uniform(2, static_cast<std::size_t>(state.range(0)));
  const auto times = default_time_grid();
  ProductOptions options;
  options.with_phase = false;
  for (auto _ : state) benchmark::DoNotOptimize(product_series(qwz_bloch(-1.0), grid, 0.1, times, options));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size() * times.size()));
}
BENCHMARK(BM_ProductSeriesQwz)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_RealspaceSshOpen(benchmark::State& state) {
  const auto chain = ssh_open_chain(static_cast<std::size_t>(state.range(0)), 0.5);
  const auto times = time_grid(20.0, 40);
  for (auto _ : state) benchmark::DoNotOptimize(realspace_series(chain, 0.1, times));
}
BENCHMARK(BM_RealspaceSshOpen)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_LocateNodesWeyl(benchmark::State& state) {
  WeylParameters p;
  p.b3 = 1.8;
  const auto model = weyl_bloch(p);
  const auto grid = MomentumGrid::uniform(3, 16);
  for (auto _ : state) benchmark::DoNotOptimize(locate_nodes(model, grid));
}
BENCHMARK(BM_LocateNodesWeyl)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
