#include <benchmark/benchmark.h>

#include "cdflow/closure.hpp"
#include "cdflow/elliptic.hpp"
#include "cdflow/fixed_point.hpp"
#include "cdflow/free_boundary.hpp"
#include "cdflow/lagrangian.hpp"
#include "cdflow/profile.hpp"

namespace {

using namespace cdflow;

BackgroundState bench_background() {
  return make_background({1.4, 1.0}, 1.0, 5.0, 1.0);
}

// Single-channel cosine perturbation of the inlet mass flux.
InletData bench_inlet(const BackgroundState& bg, double sigma) {
  PerturbationFamily fam;
  fam.j = {{Basis::cosine, 2, 1.0}};
  return make_inlet(bg, fam, sigma);
}

void BM_Factorize(benchmark::State& state) {
  const int n = int(state.range(0));
  const auto bg = bench_background();
  const Grid g = make_grid(n, n, 1.0, 0.5);
  for (auto _ : state) {
    InnerLinearSystem lin(g, bg);
    benchmark::DoNotOptimize(&lin);
  }
}
BENCHMARK(BM_Factorize)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_PicardStep(benchmark::State& state) {
  const int n = int(state.range(0));
  const auto bg = bench_background();
  const auto inlet = bench_inlet(bg, 1e-3);
  const double m = mass_flux_parameter(inlet);
  const Grid g = make_grid(n, n, 1.0, m);
  const auto tp = inlet_to_lagrangian(inlet, g);
  InnerSolver solver(g, bg, tp);
  const auto st = background_state(g, bg, tp);
  const std::vector<double> w(g.nodes1(), 0.0);
  for (auto _ : state) {
    auto next = solver.step(st, w, {});
    benchmark::DoNotOptimize(next.w1.data.data());
  }
}
BENCHMARK(BM_PicardStep)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_InnerSolve(benchmark::State& state) {
  const int n = int(state.range(0));
  const auto bg = bench_background();
  const auto inlet = bench_inlet(bg, 1e-3);
  const double m = mass_flux_parameter(inlet);
  const Grid g = make_grid(n, n, 1.0, m);
  const auto tp = inlet_to_lagrangian(inlet, g);
  InnerSolver solver(g, bg, tp);
  const std::vector<double> w(g.nodes1(), 0.0);
  for (auto _ : state) {
    auto st = solver.solve(w, {});
    benchmark::DoNotOptimize(st.rho.data.data());
  }
}
BENCHMARK(BM_InnerSolve)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_NewtonSolve(benchmark::State& state) {
  const int n = int(state.range(0));
  const auto bg = bench_background();
  const auto inlet = bench_inlet(bg, 1e-3);
  const double m = mass_flux_parameter(inlet);
  const Grid g = make_grid(n, n, 1.0, m);
  const auto tp = inlet_to_lagrangian(inlet, g);
  InnerSolver solver(g, bg, tp);
  for (auto _ : state) {
    auto sol = newton_solve(solver, {});
    benchmark::DoNotOptimize(sol.contact.g.data());
  }
}
BENCHMARK(BM_NewtonSolve)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
