#include <benchmark/benchmark.h>

#include "sclkin/config.hpp"
#include "sclkin/kinetic_solver.hpp"
#include "sclkin/sampling.hpp"

using namespace sclkin;

namespace {

RateKernel make_uniform_kernel(const StateGrid& grid) {
  return kernel_uniform_up(grid, 1.0);
}

void BM_apply_kinetic_operator(benchmark::State& state) {
  const std::size_t K = static_cast<std::size_t>(state.range(0));
  const auto grid = StateGrid::uniform(K, 2.0);
  const auto h = Hamiltonian::quadratic(2.0);
  const auto f = make_uniform_kernel(grid);
  DividedDifferenceTable dd(h, grid.states());
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_kinetic_operator(f, dd));
  }
}
BENCHMARK(BM_apply_kinetic_operator)->Arg(8)->Arg(32)->Arg(128);

void BM_solve_kinetic_rk4(benchmark::State& state) {
  const std::size_t K = static_cast<std::size_t>(state.range(0));
  const auto grid = StateGrid::uniform(K, 2.0);
  const auto h = Hamiltonian::quadratic(2.0);
  const auto g = make_uniform_kernel(grid);
  SolverScheme scheme;
  scheme.dt = 1e-2;
  scheme.substeps_per_output = 10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_kinetic(g, 1.0, grid, h, 0.5, scheme));
  }
}
BENCHMARK(BM_solve_kinetic_rk4)->Arg(8)->Arg(32);

void BM_simulate_pdmp_path(benchmark::State& state) {
  const auto grid = StateGrid::uniform(2, 2.0);
  const auto h = Hamiltonian::quadratic(2.0);
  const auto g = kernel_single_step(grid, 1.0, 1.0);
  SolverScheme scheme;
  const auto kin = solve_kinetic(g, 1.0, grid, h, 1.0, scheme);
  std::uint64_t path = 0;
  for (auto _ : state) {
    PathRng rng(42, path++);
    Configuration q = sample_initial_path(g, 1.0, grid, 5.0, h, rng);
    benchmark::DoNotOptimize(
        simulate_pdmp(std::move(q), h, kin.trajectory, grid, 0.0, 1.0, rng));
  }
}
BENCHMARK(BM_simulate_pdmp_path);

void BM_sample_candidate(benchmark::State& state) {
  const auto grid = StateGrid::uniform(2, 2.0);
  const auto h = Hamiltonian::quadratic(2.0);
  const auto f = kernel_single_step(grid, 1.0, 1.0);
  const auto ell = MarginalMeasure::point_mass(grid.size(), 0);
  std::uint64_t path = 0;
  for (auto _ : state) {
    PathRng rng(42, path++);
    benchmark::DoNotOptimize(sample_candidate(ell, f, 1.0, grid, 5.0, h, rng));
  }
}
BENCHMARK(BM_sample_candidate);

}  // namespace

BENCHMARK_MAIN();
