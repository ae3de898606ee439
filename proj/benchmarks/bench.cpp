#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "eqsynth/analysis.hpp"
#include "eqsynth/preprocess.hpp"
#include "eqsynth/problems.hpp"
#include "eqsynth/solvers.hpp"
#include "eqsynth/synthesis.hpp"

using namespace eqsynth;

namespace {

struct Fixture {
  QuadraticInstance quad;
  PreprocessedProblem pre;

  explicit Fixture(Eigen::Index n)
      : quad(generate_quadratic(n, 1.0, 2000.0, SpectrumLaw::LogUniform, 42)),
        pre(preprocess(generate_constraint(n, (4 * n) / 5, 0.1, 1.0, 101),
                       Eigen::VectorXd::Zero(n))) {}
};

void BM_synth_step(benchmark::State& state) {
  Fixture f(state.range(0));
  auto params = SynthesisParams::make(f.quad.profile, f.pre.spectral.sigma_min,
                                      f.pre.spectral.sigma_max);
  SynthSolver solver(ConstraintOperator(f.pre.E_norm), params.rho, params.eta,
                     Eigen::VectorXd::Zero(f.quad.dim()));
  for (auto _ : state) {
    solver.step(f.quad.gradient(solver.x()));
    benchmark::DoNotOptimize(solver.x());
  }
}
BENCHMARK(BM_synth_step)->Arg(100)->Arg(400);

void BM_gda_inc_step(benchmark::State& state) {
  Fixture f(state.range(0));
  auto s = gda_stepsizes(f.quad.profile, f.pre.spectral.sigma_max, f.pre.spectral.kappa_E);
  GdaSolver solver(f.pre.E_norm, s.alpha1, s.alpha2, GdaMode::Incremental,
                   Eigen::VectorXd::Zero(f.quad.dim()));
  for (auto _ : state) {
    solver.step(f.quad.gradient(solver.x()));
    benchmark::DoNotOptimize(solver.x());
  }
}
BENCHMARK(BM_gda_inc_step)->Arg(100)->Arg(400);

void BM_spectral_analysis(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  auto e = generate_constraint(n, (4 * n) / 5, 0.1, 1.0, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_analysis(e));
  }
}
BENCHMARK(BM_spectral_analysis)->Arg(100)->Arg(400);

void BM_certify(benchmark::State& state) {
  auto params = SynthesisParams::make(ConvexityProfile{1.0, 2000.0}, 0.1, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(certify(params));
  }
}
BENCHMARK(BM_certify);

void BM_iteration_matrix_radius(benchmark::State& state) {
  Fixture f(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(iteration_matrix(Algorithm::Synthesized, f.quad, f.pre));
  }
}
BENCHMARK(BM_iteration_matrix_radius)->Arg(50)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
