#include <benchmark/benchmark.h>

#include <cmath>

#include "taxis/mesh_ops.hpp"
#include "taxis/solver.hpp"

using namespace taxis;

namespace {

Grid square_grid(int n) { return Grid(2, {1.0, 1.0}, {n, n}); }

ScalarField wavy_field(const Grid& g) {
  ScalarField f(g);
  f.fill_from([](double x, double y) {
    return 1.0 + 0.5 * std::cos(3.14159 * x) * std::cos(3.14159 * y);
  });
  return f;
}

void BM_Integrate(benchmark::State& state) {
  Grid g = square_grid(static_cast<int>(state.range(0)));
  ScalarField f = wavy_field(g);
  for (auto _ : state) benchmark::DoNotOptimize(integrate(f));
  state.SetItemsProcessed(state.iterations() * g.num_cells());
}
BENCHMARK(BM_Integrate)->Arg(64)->Arg(128)->Arg(256);

void BM_GradientDivergence(benchmark::State& state) {
  Grid g = square_grid(static_cast<int>(state.range(0)));
  ScalarField f = wavy_field(g);
  for (auto _ : state) {
    ScalarField lap = laplacian_neumann(f);
    benchmark::DoNotOptimize(lap);
  }
  state.SetItemsProcessed(state.iterations() * g.num_cells());
}
BENCHMARK(BM_GradientDivergence)->Arg(64)->Arg(128)->Arg(256);

void BM_SolverStep(benchmark::State& state) {
  Grid g = square_grid(static_cast<int>(state.range(0)));
  ModelSpec spec;
  spec.chi = Sensitivity::constant(1.0);
  spec.n = spec.l = 4;
  spec.k = 16;
  ProfileSpec up;
  up.kind = ProfileSpec::Kind::Cosine;
  up.offset = 1.0;
  up.amplitude = 0.5;
  up.mode_y = 1;
  ProfileSpec vp = up;
  vp.amplitude = -0.3;
  SimState s = init_data(g, up, vp);
  StepControl ctl;
  ctl.dt = 1e-4;
  for (auto _ : state) {
    StepResult r = step(s, spec, ctl);
    benchmark::DoNotOptimize(r.state.u[0]);
  }
  state.SetItemsProcessed(state.iterations() * g.num_cells());
}
BENCHMARK(BM_SolverStep)->Arg(64)->Arg(128)->Arg(256);

void BM_MStar(benchmark::State& state) {
  ModelSpec spec;
  spec.chi = Sensitivity::rational(1.5, 0.4, 0.2);
  spec.a = 2.8;
  spec.b = 3.3;
  spec.n = 2;
  spec.l = 2;
  const Sigma sigma = make_sigma_c(spec);
  for (auto _ : state)
    benchmark::DoNotOptimize(m_star(spec.a, spec.b, spec.n, spec.l, sigma));
}
BENCHMARK(BM_MStar);

} // namespace

BENCHMARK_MAIN();
