#include <random>

#include <benchmark/benchmark.h>

#include "trackctl/firefly.hpp"
#include "trackctl/lqr.hpp"
#include "trackctl/simrun.hpp"

using namespace trackctl;

static void BM_SolveCare(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Matrix a(n, n), b(n, 1);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = normal(rng);
  for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = normal(rng);
  const Matrix q = Matrix::Identity(n, n);
  const Matrix r = Matrix::Identity(1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_care(a, b, q, r));
}
BENCHMARK(BM_SolveCare)->Arg(2)->Arg(4)->Arg(8)->Arg(12);

static void BM_KfStep(benchmark::State& state) {
  const Scenario s = make_preset(kPresetLongitudinal);
  const ClosedLoopSetup setup = prepare_closed_loop(s);
  FilterState fs = kf_init(setup.filter, s.initial_estimate, s.initial_covariance);
  const Vector z = s.initial_state;
  for (auto _ : state) {
    fs = kf_step(fs, z, setup.filter);
    benchmark::DoNotOptimize(fs.x_est.data());
  }
}
BENCHMARK(BM_KfStep);

static void BM_RunScenario(benchmark::State& state) {
  const Scenario s = make_preset(state.range(0) == 0 ? kPresetPlanar : kPresetLongitudinal);
  const ClosedLoopSetup setup = prepare_closed_loop(s);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(s, setup, ++seed).summary.mse);
}
BENCHMARK(BM_RunScenario)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_FireflySphere(benchmark::State& state) {
  const SearchSpace box{Vector::Constant(2, -5.0), Vector::Constant(2, 5.0)};
  FireflyParams p;
  p.iterations = 50;
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize([](const Vector& x) { return x.squaredNorm(); }, box, p));
  }
}
BENCHMARK(BM_FireflySphere)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
