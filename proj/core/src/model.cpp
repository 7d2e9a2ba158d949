#include "epistock/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "epistock/sigmoid.hpp"

namespace epistock {

double effective_reproduction(const EpidemicParams& ep, double stock,
                              const ModelNumerics& num) {
  return ep.r0 * (1.0 - ep.r * sigmoid(stock - num.s_offset, num.k_stock_step));
}

double switch_value(double ratio_a, double ratio_b, double theta, double k) {
  const double above = sigmoid(ratio_a - theta, k) + sigmoid(ratio_b - theta, k);
  const double below = sigmoid(theta - ratio_a, k) + sigmoid(theta - ratio_b, k);
  return 2.0 * (0.5 - sigmoid(above - 2.0, k) - sigmoid(below - 2.0, k));
}

double share_flow(double s_a, double s_b, const CommunityParams& ca,
                  const CommunityParams& cb) {
  const double ratio_a = s_a / ca.s_max;
  const double ratio_b = s_b / cb.s_max;
  return 0.5 * (ca.s_max + cb.s_max) * (ratio_b - ratio_a);
}

namespace {

struct CommunityDerivs {
  double du, di, drec, dd;
};

// SIR block plus the demand channel for one community. All epidemic terms
// are gated by the onset sigmoid so the community sits at equilibrium
// until its epidemic begins.
CommunityDerivs sir_demand_derivs(double t, const double* y,
                                  const EpidemicParams& ep,
                                  const CommunityParams& c,
                                  const ModelNumerics& num) {
  const double gate = sigmoid(t - c.onset, num.k_delay);
  const double re = effective_reproduction(ep, y[kS], num);
  const double beta = re * ep.gamma;
  const double infection_flux = beta * y[kU] * y[kI] / c.n;

  CommunityDerivs d{};
  d.du = -gate * infection_flux;
  d.di = gate * (infection_flux - ep.gamma * y[kI]);
  d.drec = gate * ep.gamma * y[kI];
  d.dd = num.demand_mode == DemandMode::TracksInfected ? ep.w * d.di
                                                       : gate * ep.w * y[kI];
  return d;
}

// Production chases demand, replenishes a drawn-down stock and backs off
// after an overshoot, all gated so it never exceeds p_max.
double production_deriv(const double* y, double dd, const CommunityParams& c) {
  const double replenish =
      (c.p_max - y[kP]) * (1.0 - y[kS] / c.s_max) * sigmoid(c.s_max - y[kS]);
  const double overshoot = (y[kP] - y[kD]) * sigmoid(y[kP] - y[kD]);
  return (dd + replenish - overshoot) * sigmoid(c.p_max - y[kP]);
}

// Smooth one-sided clamp on the net stock rate: floor at 0 for outflow,
// ceiling at s_max for inflow. The band is 0.1% of s_max per unit k_clamp.
double stock_deriv(double net_rate, double s, const CommunityParams& c,
                   const ModelNumerics& num) {
  const double k_c = num.k_clamp / (1e-3 * c.s_max);
  const double clamp =
      net_rate < 0.0 ? sigmoid(s, k_c) : sigmoid(c.s_max - s, k_c);
  return net_rate * clamp;
}

}  // namespace

void coupled_rhs(double t, std::span<const double> y, std::span<double> dydt,
                 const EpidemicParams& ep, const CommunityParams& ca,
                 const CommunityParams& cb, const SharingParams& sh,
                 const ModelNumerics& num) {
  const double* ya = y.data();
  const double* yb = y.data() + kCommunityB;

  const CommunityDerivs da = sir_demand_derivs(t, ya, ep, ca, num);
  const CommunityDerivs db = sir_demand_derivs(t, yb, ep, cb, num);

  // theta >= 1 means "keep everything": identical to sharing disabled.
  double transfer = 0.0;
  if (sh.enabled && sh.theta < 1.0) {
    const double sw = switch_value(ya[kS] / ca.s_max, yb[kS] / cb.s_max,
                                   sh.theta, sh.k_switch);
    transfer = sw * share_flow(ya[kS], yb[kS], ca, cb);
  }

  const double net_a = ya[kP] - ya[kD] * sigmoid(ya[kS]) + transfer;
  const double net_b = yb[kP] - yb[kD] * sigmoid(yb[kS]) - transfer;

  dydt[kU] = da.du;
  dydt[kI] = da.di;
  dydt[kRec] = da.drec;
  dydt[kD] = da.dd;
  dydt[kS] = stock_deriv(net_a, ya[kS], ca, num);
  dydt[kP] = production_deriv(ya, da.dd, ca);

  dydt[kCommunityB + kU] = db.du;
  dydt[kCommunityB + kI] = db.di;
  dydt[kCommunityB + kRec] = db.drec;
  dydt[kCommunityB + kD] = db.dd;
  dydt[kCommunityB + kS] = stock_deriv(net_b, yb[kS], cb, num);
  dydt[kCommunityB + kP] = production_deriv(yb, db.dd, cb);

  for (double v : dydt) {
    if (!std::isfinite(v)) {
      throw NonFiniteDerivativeError("coupled model produced a non-finite derivative", t);
    }
  }
}

SystemState initial_state(const EpidemicParams&, const CommunityParams& ca,
                          const CommunityParams& cb) {
  SystemState y{};
  const CommunityParams* cs[2] = {&ca, &cb};
  for (std::size_t c = 0; c < 2; ++c) {
    double* yc = y.data() + c * kCommunityB;
    yc[kU] = cs[c]->n - 1.0;
    yc[kI] = 1.0;
    yc[kRec] = 0.0;
    yc[kD] = cs[c]->d0;
    yc[kS] = cs[c]->s_max;
    yc[kP] = cs[c]->p0;
  }
  return y;
}

std::vector<double> default_abs_scales(const ScenarioParams& params) {
  std::vector<double> scales(kStateDim);
  const CommunityParams* cs[2] = {&params.community_a, &params.community_b};
  for (std::size_t c = 0; c < 2; ++c) {
    double* s = scales.data() + c * kCommunityB;
    s[kU] = s[kI] = s[kRec] = cs[c]->n;
    s[kD] = s[kP] = cs[c]->p_max;
    s[kS] = cs[c]->s_max;
  }
  return scales;
}

double default_t_start(const ScenarioParams& params) {
  return std::min({0.0, params.community_a.onset, params.community_b.onset}) -
         5.0;
}

double default_t_end(const ScenarioParams& params, double horizon) {
  return std::max({0.0, params.community_a.onset, params.community_b.onset}) +
         horizon;
}

namespace {

Trajectory assemble_trajectory(const ScenarioParams& params,
                               const SolveResult& res) {
  Trajectory traj;
  traj.params = params;
  traj.samples.reserve(res.times.size());

  const auto& ca = params.community_a;
  const auto& cb = params.community_b;
  const auto& sh = params.sharing;
  const bool sharing_active = sh.enabled && sh.theta < 1.0;

  for (std::size_t k = 0; k < res.times.size(); ++k) {
    TrajectorySample sample;
    sample.t = res.times[k];
    std::copy_n(res.states[k].begin(), kStateDim, sample.state.begin());

    const double s_a = sample.state[kS];
    const double s_b = sample.state[kCommunityB + kS];
    sample.re_a = effective_reproduction(params.epidemic, s_a, params.numerics);
    sample.re_b = effective_reproduction(params.epidemic, s_b, params.numerics);
    if (sharing_active) {
      sample.switch_value =
          switch_value(s_a / ca.s_max, s_b / cb.s_max, sh.theta, sh.k_switch);
      sample.transfer_rate = sample.switch_value * share_flow(s_a, s_b, ca, cb);
    }
    traj.samples.push_back(sample);
  }

  traj.failed = !res.ok();
  traj.failure_status = res.status;
  traj.failure = res.message;
  if (!traj.failed && !traj.samples.empty()) {
    const auto& last = traj.samples.back().state;
    traj.complete =
        last[kI] <= 1.0 + 1e-9 && last[kCommunityB + kI] <= 1.0 + 1e-9;
  }
  return traj;
}

}  // namespace

Trajectory try_run_scenario(const EpidemicParams& ep, const CommunityParams& ca,
                            const CommunityParams& cb, const SharingParams& sh,
                            const ModelNumerics& num,
                            const IntegratorSettings& settings) {
  ScenarioParams params{ep, ca, cb, sh, num};
  IntegratorSettings local = settings;
  if (local.abs_scales.empty()) {
    local.abs_scales = default_abs_scales(params);
  }

  const SystemState y0 = initial_state(ep, ca, cb);
  // A non-finite derivative surfaces to the solver as NaNs so that the
  // step controller rejects the step and the sampled prefix survives.
  RhsFn rhs = [&](double t, std::span<const double> y, std::span<double> dydt) {
    try {
      coupled_rhs(t, y, dydt, ep, ca, cb, sh, num);
    } catch (const NonFiniteDerivativeError&) {
      std::fill(dydt.begin(), dydt.end(),
                std::numeric_limits<double>::quiet_NaN());
    }
  };

  return assemble_trajectory(params, try_integrate(rhs, y0, local));
}

Trajectory run_scenario(const EpidemicParams& ep, const CommunityParams& ca,
                        const CommunityParams& cb, const SharingParams& sh,
                        const ModelNumerics& num,
                        const IntegratorSettings& settings) {
  Trajectory traj = try_run_scenario(ep, ca, cb, sh, num, settings);
  if (traj.failed) {
    if (traj.failure_status == SolveStatus::StepUnderflow) {
      throw StepUnderflowError(traj.failure, traj.t_end());
    }
    throw NonFiniteStateError(traj.failure, traj.t_end());
  }
  return traj;
}

}  // namespace epistock
