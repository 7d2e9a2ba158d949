#include <benchmark/benchmark.h>

#include "epistock/config.hpp"
#include "epistock/model.hpp"
#include "epistock/sigmoid.hpp"
#include "epistock/sweep.hpp"

using namespace epistock;

static void BM_Sigmoid(benchmark::State& state) {
  double x = -2.0;
  for (auto _ : state) {
    x += 1e-6;
    benchmark::DoNotOptimize(sigmoid(x, 1000.0));
  }
}
BENCHMARK(BM_Sigmoid);

static void BM_CoupledRhs(benchmark::State& state) {
  const ScenarioConfig cfg = default_config();
  const ScenarioParams p = cfg.params();
  const SystemState y0 = initial_state(p.epidemic, p.community_a, p.community_b);
  SystemState dy{};
  double t = 0.0;
  for (auto _ : state) {
    t += 1e-3;
    coupled_rhs(t, y0, dy, p.epidemic, p.community_a, p.community_b, p.sharing,
                p.numerics);
    benchmark::DoNotOptimize(dy);
  }
}
BENCHMARK(BM_CoupledRhs);

static void BM_Scenario(benchmark::State& state) {
  ScenarioConfig cfg = default_config();
  cfg.sharing.enabled = state.range(0) != 0;
  const ScenarioParams p = cfg.params();
  for (auto _ : state) {
    const Trajectory traj =
        try_run_scenario(p.epidemic, p.community_a, p.community_b, p.sharing,
                         p.numerics, cfg.integrator_settings());
    benchmark::DoNotOptimize(traj.samples.size());
  }
}
BENCHMARK(BM_Scenario)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_SmallSweep(benchmark::State& state) {
  const ScenarioConfig cfg = default_config();
  const SweepAxis ax{AxisParam::Theta, 0.0, 1.0, 4};
  const SweepAxis ay{AxisParam::OnsetB, 0.0, 240.0, 4};
  const auto workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    const SweepResult res = run_sweep(cfg, ax, ay, workers);
    benchmark::DoNotOptimize(res.points.size());
  }
}
BENCHMARK(BM_SmallSweep)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
