#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "epistock/config.hpp"
#include "epistock/metrics.hpp"
#include "oracles.hpp"

using namespace epistock;

namespace {

// Single active community: B never leaves equilibrium, sharing off.
ScenarioConfig single_community_config() {
  ScenarioConfig cfg = default_config();
  cfg.sharing.enabled = false;
  cfg.community_b.onset = 1e9;
  return cfg;
}

Trajectory run(const ScenarioConfig& cfg, double t_start, double t_end) {
  const ScenarioParams p = cfg.params();
  IntegratorSettings s = cfg.integrator_settings();
  s.t_start = t_start;
  s.t_end = t_end;
  return run_scenario(p.epidemic, p.community_a, p.community_b, p.sharing,
                      p.numerics, s);
}

}  // namespace

TEST_CASE("classify covers all four combinations") {
  CHECK(classify(true, true) == OutcomeClass::Red);
  CHECK(classify(true, false) == OutcomeClass::WhiteA);
  CHECK(classify(false, true) == OutcomeClass::WhiteB);
  CHECK(classify(false, false) == OutcomeClass::Blue);
  CHECK(to_string(OutcomeClass::Red) == "RED");
  CHECK(outcome_from_string("WHITE_B") == OutcomeClass::WhiteB);
}

TEST_CASE("final size against the fixed-point oracle") {
  SUBCASE("stock permanently available") {
    ScenarioConfig cfg = single_community_config();
    cfg.community_a.s_max = 1e13;  // demand can never dent this
    const Trajectory traj = run(cfg, -5.0, 600.0);
    CHECK(traj.complete);
    const double expected = oracle::final_size_root(2.3 * (1.0 - 0.4));
    CHECK(expected == doctest::Approx(0.495).epsilon(0.01));
    CHECK(std::abs(infected_ratio(traj, Community::A) - expected) < 0.03);
    CHECK_FALSE(stock_depleted(traj, Community::A));
  }
  SUBCASE("protection disabled reproduces the bare epidemic") {
    ScenarioConfig cfg = single_community_config();
    cfg.epidemic.r = 0.0;
    const Trajectory traj = run(cfg, -5.0, 600.0);
    const double expected = oracle::final_size_root(2.3);
    CHECK(expected == doctest::Approx(0.86).epsilon(0.01));
    CHECK(std::abs(infected_ratio(traj, Community::A) - expected) < 0.03);
  }
}

TEST_CASE("subcritical epidemic dies out") {
  ScenarioConfig cfg = single_community_config();
  cfg.epidemic.r0 = 1.2;  // 1.2 * (1 - 0.4) = 0.72 < 1 with stock available
  cfg.community_a.s_max = 1e13;
  const Trajectory traj = run(cfg, -5.0, 400.0);
  CHECK(infected_ratio(traj, Community::A) < 0.05);
  CHECK_FALSE(stock_depleted(traj, Community::A));
  CHECK(unserved_infected_ratio(traj, Community::A) == 0.0);
}

TEST_CASE("unserved infected ratio") {
  ScenarioConfig cfg = single_community_config();
  const Trajectory traj = run(cfg, -5.0, 600.0);  // medium stock depletes

  SUBCASE("bounded by the infected ratio") {
    const double unserved = unserved_infected_ratio(traj, Community::A);
    CHECK(unserved > 0.0);  // the flare exceeds the 5% cap
    CHECK(unserved <= infected_ratio(traj, Community::A));
  }
  SUBCASE("cap of one full population is never exceeded") {
    CHECK(unserved_infected_ratio(traj, Community::A, 1.0) == 0.0);
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(unserved_infected_ratio(traj, Community::A, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(stock_depleted(traj, Community::A, 0.2),
                    std::invalid_argument);
  }
}

TEST_CASE("infected ratio is stable under resampling") {
  ScenarioConfig cfg = single_community_config();
  cfg.numerics.dense_output_dt = 0.5;
  const Trajectory coarse = run(cfg, -5.0, 500.0);
  cfg.numerics.dense_output_dt = 0.25;
  const Trajectory fine = run(cfg, -5.0, 500.0);
  CHECK(std::abs(infected_ratio(coarse, Community::A) -
                 infected_ratio(fine, Community::A)) < 1e-3);
}

TEST_CASE("summary gathers the per-community channels") {
  ScenarioConfig cfg = default_config();  // sharing scenario, theta = 0.6
  const Trajectory traj = run(cfg, -5.0, 780.0);
  const ScenarioSummary s = summarize(traj);
  CHECK(s.infected_ratio_mean ==
        doctest::Approx(0.5 * (s.infected_ratio_a + s.infected_ratio_b)));
  CHECK(s.min_stock_ratio_a >= -0.01);
  CHECK(s.peak_infected_a > 0.0);
  CHECK(s.outcome == classify(s.depleted_a, s.depleted_b));
  CHECK(s.complete == traj.complete);
}
