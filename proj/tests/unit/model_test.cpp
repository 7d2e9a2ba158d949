#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "epistock/config.hpp"
#include "epistock/model.hpp"
#include "epistock/sigmoid.hpp"

using namespace epistock;

namespace {

SystemState random_state(std::mt19937_64& rng, const CommunityParams& ca,
                         const CommunityParams& cb) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  SystemState y{};
  const CommunityParams* cs[2] = {&ca, &cb};
  for (int c = 0; c < 2; ++c) {
    double* yc = y.data() + c * kCommunityB;
    const double infected = u01(rng) * 0.3 * cs[c]->n;
    const double rec = u01(rng) * 0.5 * cs[c]->n;
    yc[kU] = cs[c]->n - infected - rec;
    yc[kI] = infected;
    yc[kRec] = rec;
    yc[kD] = cs[c]->d0 * (1.0 + 3.0 * u01(rng));
    yc[kS] = (0.1 + 0.8 * u01(rng)) * cs[c]->s_max;  // clamps stay at 1
    yc[kP] = cs[c]->p0 * (1.0 + 2.0 * u01(rng));
  }
  return y;
}

}  // namespace

TEST_CASE("effective reproduction number") {
  EpidemicParams ep;
  ModelNumerics num;
  // Saturated availability step: R0 * (1 - r).
  CHECK(std::abs(effective_reproduction(ep, 1e7, num) - 1.38) < 1e-6);
  // Empty stock: sigmoid(-s_offset) = 1/(1+e), so
  // 2.3 * (1 - 0.4 * 0.26894142) = 2.0525738923...
  CHECK(std::abs(effective_reproduction(ep, 0.0, num) - 2.0525738923396043) <
        1e-4);
  EpidemicParams no_protection = ep;
  no_protection.r = 0.0;
  CHECK(effective_reproduction(no_protection, 12345.0, num) == 2.3);
  CHECK(effective_reproduction(no_protection, 0.0, num) == 2.3);
}

TEST_CASE("switch truth values") {
  CHECK(std::abs(switch_value(0.9, 0.9, 0.5, 1000) - 0.0) < 1e-6);
  CHECK(std::abs(switch_value(0.2, 0.9, 0.5, 1000) - 1.0) < 1e-6);
  CHECK(std::abs(switch_value(0.9, 0.2, 0.5, 1000) - 1.0) < 1e-6);
  CHECK(std::abs(switch_value(0.2, 0.2, 0.5, 1000) - 0.0) < 1e-6);
}

TEST_CASE("switch matches the exactly-one-below predicate away from theta") {
  // The nested sigmoids place the on/off boundary at ln(2k)/k from theta;
  // a margin of 17/k keeps every sample within 1e-4 of the predicate.
  const double k = 1000.0;
  const double margin = 17.0 / k;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int checked = 0;
  while (checked < 10000) {
    const double theta = u01(rng);
    const double ra = u01(rng);
    const double rb = u01(rng);
    if (std::abs(ra - theta) <= margin || std::abs(rb - theta) <= margin) {
      continue;
    }
    ++checked;
    const bool exactly_one = (ra < theta) != (rb < theta);
    const double expected = exactly_one ? 1.0 : 0.0;
    CHECK(std::abs(switch_value(ra, rb, theta, k) - expected) < 1e-4);
  }
}

TEST_CASE("share flow") {
  CommunityParams ca, cb;
  ca.s_max = 3e7;
  cb.s_max = 3e7;
  CHECK(share_flow(1.2e7, 2.4e7, ca, cb) == doctest::Approx(1.2e7));
  CHECK(share_flow(1.5e7, 1.5e7, ca, cb) == 0.0);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    CommunityParams x, y;
    x.s_max = 1e6 + 1e8 * u01(rng);
    y.s_max = 1e6 + 1e8 * u01(rng);
    const double sx = x.s_max * u01(rng);
    const double sy = y.s_max * u01(rng);
    CHECK(share_flow(sx, sy, x, y) == doctest::Approx(-share_flow(sy, sx, y, x)));
    const bool into_a = share_flow(sx, sy, x, y) > 0.0;
    CHECK(into_a == (sy / y.s_max > sx / x.s_max));
  }
}

TEST_CASE("initial state") {
  EpidemicParams ep;
  CommunityParams c;
  c.n = 1.7e7;
  c.s_max = 3e7;
  c.p0 = 5e7;
  c.p_max = 2e8;
  c.d0 = 5e7;
  const SystemState y = initial_state(ep, c, c);
  CHECK(y[kU] == 16999999.0);
  CHECK(y[kI] == 1.0);
  CHECK(y[kRec] == 0.0);
  CHECK(y[kD] == 5e7);
  CHECK(y[kS] == 3e7);
  CHECK(y[kP] == 5e7);
  for (std::size_t f = 0; f < kCommunityB; ++f) {
    CHECK(y[f] == y[kCommunityB + f]);
  }
  CHECK(y[kU] + y[kI] + y[kRec] == c.n);
}

TEST_CASE("pre-onset equilibrium") {
  ScenarioConfig cfg = default_config();
  const ScenarioParams p = cfg.params();
  const SystemState y0 = initial_state(p.epidemic, p.community_a, p.community_b);
  SystemState dy{};
  coupled_rhs(-40.0, y0, dy, p.epidemic, p.community_a, p.community_b,
              p.sharing, p.numerics);
  const auto scales = default_abs_scales(p);
  for (std::size_t i = 0; i < kStateDim; ++i) {
    CHECK(std::abs(dy[i]) / scales[i] < 1e-6);
  }
}

TEST_CASE("theta = 1 decouples the communities") {
  ScenarioConfig cfg = default_config();
  ScenarioParams p = cfg.params();
  std::mt19937_64 rng(3);

  for (int trial = 0; trial < 50; ++trial) {
    const SystemState y = random_state(rng, p.community_a, p.community_b);
    SharingParams theta_one = p.sharing;
    theta_one.theta = 1.0;
    theta_one.enabled = true;
    SharingParams off = p.sharing;
    off.enabled = false;

    SystemState d_one{}, d_off{};
    coupled_rhs(100.0, y, d_one, p.epidemic, p.community_a, p.community_b,
                theta_one, p.numerics);
    coupled_rhs(100.0, y, d_off, p.epidemic, p.community_a, p.community_b, off,
                p.numerics);
    for (std::size_t i = 0; i < kStateDim; ++i) {
      CHECK(d_one[i] == d_off[i]);
    }

    // Community A's block must not depend on community B at all.
    CommunityParams other_b = p.community_b;
    other_b.n *= 2.3;
    other_b.s_max *= 0.4;
    other_b.p0 *= 1.7;
    other_b.d0 = other_b.p0;
    SystemState d_mod{};
    coupled_rhs(100.0, y, d_mod, p.epidemic, p.community_a, other_b, off,
                p.numerics);
    for (std::size_t i = 0; i < kCommunityB; ++i) {
      CHECK(d_mod[i] == d_off[i]);
    }
  }
}

TEST_CASE("transfer term moves stock without creating it") {
  ScenarioConfig cfg = default_config();
  ScenarioParams p = cfg.params();
  std::mt19937_64 rng(5);

  for (int trial = 0; trial < 100; ++trial) {
    const SystemState y = random_state(rng, p.community_a, p.community_b);
    SharingParams on = p.sharing;
    on.theta = 0.45;
    SharingParams off = p.sharing;
    off.enabled = false;

    SystemState d_on{}, d_off{};
    coupled_rhs(100.0, y, d_on, p.epidemic, p.community_a, p.community_b, on,
                p.numerics);
    coupled_rhs(100.0, y, d_off, p.epidemic, p.community_a, p.community_b, off,
                p.numerics);
    // Both stocks sit well inside the clamps, so the transfer cancels in
    // the sum and only redistributes between the two stock derivatives.
    const double total_on = d_on[kS] + d_on[kCommunityB + kS];
    const double total_off = d_off[kS] + d_off[kCommunityB + kS];
    CHECK(std::abs(total_on - total_off) <
          1e-9 * (p.community_a.s_max + p.community_b.s_max));
  }
}

TEST_CASE("demand modes") {
  ScenarioConfig cfg = default_config();
  ScenarioParams p = cfg.params();
  std::mt19937_64 rng(9);
  const SystemState y = random_state(rng, p.community_a, p.community_b);

  ModelNumerics tracks = p.numerics;
  tracks.demand_mode = DemandMode::TracksInfected;
  ModelNumerics integrates = p.numerics;
  integrates.demand_mode = DemandMode::IntegratesInfected;

  SystemState d_tracks{}, d_int{};
  coupled_rhs(50.0, y, d_tracks, p.epidemic, p.community_a, p.community_b,
              p.sharing, tracks);
  coupled_rhs(50.0, y, d_int, p.epidemic, p.community_a, p.community_b,
              p.sharing, integrates);

  // Demand follows the infected derivative in one mode and the infected
  // level (onset-gated) in the other.
  CHECK(d_tracks[kD] == doctest::Approx(p.epidemic.w * d_tracks[kI]));
  const double gate = sigmoid(50.0 - p.community_a.onset, tracks.k_delay);
  CHECK(d_int[kD] == doctest::Approx(p.epidemic.w * y[kI] * gate));
}

TEST_CASE("simultaneous onset keeps identical communities in lockstep") {
  ScenarioConfig cfg = default_config();
  cfg.community_b.onset = 0.0;
  cfg.sharing.theta = 0.6;
  cfg.numerics.horizon = 400.0;
  const ScenarioParams p = cfg.params();
  const Trajectory traj =
      run_scenario(p.epidemic, p.community_a, p.community_b, p.sharing,
                   p.numerics, cfg.integrator_settings());
  for (const auto& sample : traj.samples) {
    for (std::size_t f = 0; f < kCommunityB; ++f) {
      const double a = sample.state[f];
      const double b = sample.state[kCommunityB + f];
      CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("no-sharing equivalence along whole trajectories") {
  ScenarioConfig cfg = default_config();
  cfg.numerics.horizon = 400.0;
  ScenarioParams p = cfg.params();

  SharingParams theta_one = p.sharing;
  theta_one.theta = 1.0;
  SharingParams off = p.sharing;
  off.enabled = false;

  const Trajectory a = run_scenario(p.epidemic, p.community_a, p.community_b,
                                    theta_one, p.numerics,
                                    cfg.integrator_settings());
  const Trajectory b = run_scenario(p.epidemic, p.community_a, p.community_b,
                                    off, p.numerics, cfg.integrator_settings());
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    for (std::size_t i = 0; i < kStateDim; ++i) {
      CHECK(a.samples[k].state[i] == b.samples[k].state[i]);
    }
  }
}

TEST_CASE("conservation and bounds on the default scenario") {
  ScenarioConfig cfg = default_config();
  const ScenarioParams p = cfg.params();
  const Trajectory traj =
      run_scenario(p.epidemic, p.community_a, p.community_b, p.sharing,
                   p.numerics, cfg.integrator_settings());
  CHECK(traj.complete);

  const CommunityParams* cs[2] = {&p.community_a, &p.community_b};
  double prev_u[2] = {1e300, 1e300};
  double prev_rec[2] = {-1e300, -1e300};
  for (const auto& sample : traj.samples) {
    for (int c = 0; c < 2; ++c) {
      const double* yc = sample.state.data() + c * kCommunityB;
      CHECK(std::abs(yc[kU] + yc[kI] + yc[kRec] - cs[c]->n) < 1e-6 * cs[c]->n);
      CHECK(yc[kS] >= -0.01 * cs[c]->s_max);
      CHECK(yc[kS] <= 1.01 * cs[c]->s_max);
      CHECK(yc[kP] >= 0.0);
      CHECK(yc[kP] <= 1.01 * cs[c]->p_max);
      CHECK(yc[kD] >= 0.0);
      CHECK(yc[kU] <= prev_u[c] + 1e-9 * cs[c]->n);
      CHECK(yc[kRec] >= prev_rec[c] - 1e-9 * cs[c]->n);
      prev_u[c] = yc[kU];
      prev_rec[c] = yc[kRec];
    }
    CHECK(sample.switch_value >= -1e-6);
    CHECK(sample.switch_value <= 1.0 + 1e-6);
    CHECK(sample.re_a >= p.epidemic.r0 * (1.0 - p.epidemic.r) - 1e-9);
    CHECK(sample.re_a <= p.epidemic.r0 + 1e-9);
  }
}

TEST_CASE("label swap with negated onsets mirrors the run") {
  ScenarioConfig direct = default_config();
  direct.community_a.s_max = 1e7;
  direct.community_b.s_max = 7e7;
  direct.community_b.onset = 60.0;
  direct.sharing.theta = 0.5;
  direct.numerics.horizon = 400.0;

  ScenarioConfig swapped = direct;
  swapped.community_a = direct.community_b;
  swapped.community_b = direct.community_a;
  swapped.community_a.onset = 0.0;
  swapped.community_b.onset = -60.0;

  const ScenarioParams pd = direct.params();
  const ScenarioParams ps = swapped.params();
  const Trajectory td =
      run_scenario(pd.epidemic, pd.community_a, pd.community_b, pd.sharing,
                   pd.numerics, direct.integrator_settings());
  const Trajectory ts =
      run_scenario(ps.epidemic, ps.community_a, ps.community_b, ps.sharing,
                   ps.numerics, swapped.integrator_settings());

  // swapped runs over [-65, 400]; direct over [-5, 460]: the swapped run at
  // time t matches the direct run at t + 60 with community labels exchanged.
  REQUIRE(td.samples.size() == ts.samples.size());
  const auto scales = default_abs_scales(pd);
  const std::size_t shift = 0;  // both sampled on aligned 0.5-day grids
  for (std::size_t k = shift; k < ts.samples.size(); ++k) {
    const auto& sw = ts.samples[k].state;
    const auto& di = td.samples[k].state;
    for (std::size_t f = 0; f < kCommunityB; ++f) {
      CHECK(std::abs(sw[f] - di[kCommunityB + f]) / scales[kCommunityB + f] <
            1e-4);
      CHECK(std::abs(sw[kCommunityB + f] - di[f]) / scales[f] < 1e-4);
    }
  }
}

TEST_CASE("failed cells keep their sampled prefix") {
  ScenarioConfig cfg = default_config();
  cfg.numerics.integrator = "rk45";
  cfg.numerics.h_min = 0.2;
  cfg.numerics.h_init = 0.2;
  cfg.numerics.rel_tol = 1e-12;
  cfg.numerics.abs_tol = 1e-12;
  const ScenarioParams p = cfg.params();
  const Trajectory traj =
      try_run_scenario(p.epidemic, p.community_a, p.community_b, p.sharing,
                       p.numerics, cfg.integrator_settings());
  CHECK(traj.failed);
  CHECK_FALSE(traj.complete);
  CHECK(!traj.samples.empty());
  CHECK_THROWS_AS(run_scenario(p.epidemic, p.community_a, p.community_b,
                               p.sharing, p.numerics,
                               cfg.integrator_settings()),
                  SolveError);
}
