#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "attkit/observer.hpp"
#include "attkit/sampling.hpp"
#include "attkit/sim.hpp"

using namespace attkit;

namespace {

const double kGain = 0.95 / std::sqrt(5.0);

MeasurementSet example_measurements(const Rotation& truth) {
  const Vec3 a1 = Vec3{1.0, -1.0, 1.0}.normalized();
  const Vec3 a2 = Vec3::unit_z();
  MeasurementSet m;
  m.inertial = {a1, a2, a1.cross(a2)};
  m.rho = {1.0, 3.0, 1.0};
  m.body.resize(3);
  for (std::size_t i = 0; i < 3; ++i) m.body[i] = truth.transposed() * m.inertial[i];
  m.omega_y = Vec3{0.1, -0.2, 0.3};
  return m;
}

void BM_RotationCompose(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Rotation a = random_rotation(rng), b = random_rotation(rng);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_RotationCompose);

void BM_ExpSo3(benchmark::State& state) {
  const Vec3 w{0.1, -0.2, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(exp_so3(w));
}
BENCHMARK(BM_ExpSo3);

void BM_GradComposite(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const WeightMatrix wi = WeightMatrix::identity();
  const HybridConfig c = make_config(Design::D1, wi, kGain, 0.8);
  const Rotation x = random_rotation(rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(grad_phi_composite(c.warp, c.kind, x, 2));
}
BENCHMARK(BM_GradComposite);

void BM_ExplicitTerms(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Rotation truth = random_rotation(rng);
  const MeasurementSet m = example_measurements(truth);
  const auto setup = make_observer_setup(ObserverMode::Hybrid3, m.inertial, m.rho, kGain, 0.8,
                                         Gains{5.0, 10.0, 0.1});
  const Rotation rhat = random_rotation(rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        explicit_terms(setup.weight, kGain, setup.config->warp.nu(0), rhat, m));
}
BENCHMARK(BM_ExplicitTerms);

void BM_ObserverStep(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Rotation truth = random_rotation(rng);
  const MeasurementSet m = example_measurements(truth);
  const auto setup = make_observer_setup(ObserverMode::Hybrid3, m.inertial, m.rho, kGain, 0.8,
                                         Gains{5.0, 10.0, 0.1});
  ObserverState st;
  st.rhat = random_rotation(rng);
  for (auto _ : state) {
    const StepResult res = step(setup, st, m, 1e-3, std::nullopt);
    benchmark::DoNotOptimize(res.state);
  }
}
BENCHMARK(BM_ObserverStep);

void BM_SimSecond(benchmark::State& state) {
  ScenarioConfig cfg = default_example(2);
  cfg.t_end = 1.0;
  cfg.record_stride = 1000;
  for (auto _ : state) {
    const RunResult res = run(cfg);
    benchmark::DoNotOptimize(res.stats);
  }
}
BENCHMARK(BM_SimSecond)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
