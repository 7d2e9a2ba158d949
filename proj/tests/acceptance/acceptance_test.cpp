#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <iostream>

#include "epistock/config.hpp"
#include "epistock/metrics.hpp"

using namespace epistock;

namespace {

void probe(const char* tag, ScenarioConfig cfg) {
  const ScenarioParams p = cfg.params();
  const auto t0 = std::chrono::steady_clock::now();
  const Trajectory traj =
      try_run_scenario(p.epidemic, p.community_a, p.community_b, p.sharing,
                       p.numerics, cfg.integrator_settings());
  const auto t1 = std::chrono::steady_clock::now();
  const ScenarioSummary s = summarize(traj);
  std::cout << tag << " outcome=" << to_string(s.outcome)
            << " zA=" << s.infected_ratio_a << " zB=" << s.infected_ratio_b
            << " minS=" << s.min_stock_ratio_a << "/" << s.min_stock_ratio_b
            << " peakI=" << s.peak_infected_a
            << " complete=" << s.complete << " failed=" << traj.failed << " ms="
            << std::chrono::duration<double, std::milli>(t1 - t0).count()
            << "\n";
}

}  // namespace

TEST_CASE("method comparison probe") {
  ScenarioConfig base = default_config();
  base.sharing.enabled = false;
  base.community_b.onset = 1e9;  // single community
  base.numerics.horizon = 600.0;

  ScenarioConfig ros = base;
  probe("ros2@1e-6 ", ros);

  ScenarioConfig ros8 = base;
  ros8.numerics.rel_tol = 1e-8;
  ros8.numerics.abs_tol = 1e-8;
  probe("ros2@1e-8 ", ros8);

  ScenarioConfig ros9 = base;
  ros9.numerics.rel_tol = 1e-9;
  ros9.numerics.abs_tol = 1e-9;
  probe("ros2@1e-9 ", ros9);

  ScenarioConfig rk = base;
  rk.numerics.integrator = "rk45";
  probe("rk45@1e-6 ", rk);
}
