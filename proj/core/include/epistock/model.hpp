#ifndef EPISTOCK_MODEL_HPP_
#define EPISTOCK_MODEL_HPP_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "epistock/solver.hpp"

namespace epistock {

/// Disease constants shared by both communities.
struct EpidemicParams {
  double r0 = 2.3;        // basic reproduction number
  double gamma = 1.0 / 6.0;  // recovery rate, 1/days
  double r = 0.4;         // infectiousness reduction while stock is available
  double w = 4.0;         // resource units needed per infected per day

  friend bool operator==(const EpidemicParams&, const EpidemicParams&) = default;
};

/// Per-community population and supply-chain constants.
struct CommunityParams {
  double n = 1.7e7;     // population size
  double s_max = 3e7;   // maximum stock, resource units
  double p0 = 5e5;      // baseline production, units/day
  double p_max = 2e6;   // maximum production, units/day
  double d0 = 5e5;      // baseline demand, units/day (equal to p0)
  double onset = 0.0;   // epidemic onset time, days (community A is at 0)

  friend bool operator==(const CommunityParams&, const CommunityParams&) = default;
};

/// Stock-sharing policy between the two communities.
struct SharingParams {
  double theta = 0.6;      // sharing threshold on the stock ratio, in [0, 1]
  double k_switch = 1000;  // switch sigmoid steepness
  bool enabled = true;

  friend bool operator==(const SharingParams&, const SharingParams&) = default;
};

enum class DemandMode {
  /// Demand level tracks the number of infected: d(t) = d0 + w*(i(t) - i(0)).
  TracksInfected,
  /// Demand accumulates: dd/dt = w * i(t), gated by the onset sigmoid.
  IntegratesInfected,
};

/// Steepness/offset constants of the smooth gates in the right-hand side.
struct ModelNumerics {
  double k_delay = 1.0;       // onset gate steepness, per day
  double k_stock_step = 1.0;  // stock-availability step in R_e, per unit
  double s_offset = 1.0;      // midpoint of the stock-availability step, units
  double k_clamp = 1.0;       // stock floor/ceiling clamp steepness (scaled
                              // internally by 1e-3 * s_max)
  DemandMode demand_mode = DemandMode::TracksInfected;

  friend bool operator==(const ModelNumerics&, const ModelNumerics&) = default;
};

/// State layout: per community (A then B): u, i, rec, d, s, p.
inline constexpr std::size_t kStateDim = 12;
inline constexpr std::size_t kU = 0, kI = 1, kRec = 2, kD = 3, kS = 4, kP = 5;
inline constexpr std::size_t kCommunityB = 6;

using SystemState = std::array<double, kStateDim>;

struct ScenarioParams {
  EpidemicParams epidemic;
  CommunityParams community_a;
  CommunityParams community_b;
  SharingParams sharing;
  ModelNumerics numerics;
};

/// R_e = r0 * (1 - r * sigmoid(s - s_offset, k_stock_step)): roughly
/// r0*(1-r) while stock is macroscopically available and approaching r0
/// once the stock has run dry.
double effective_reproduction(const EpidemicParams& ep, double stock,
                              const ModelNumerics& num);

/// Smooth gate that is ~1 when exactly one of the two stock ratios lies
/// below theta and ~0 when both are above or both below. Transition
/// layers have width of order ln(2k)/k around theta.
double switch_value(double ratio_a, double ratio_b, double theta, double k);

/// Signed stock transfer rate, positive into community A:
/// (s_max_a + s_max_b) * (ratio_b - ratio_a) / 2. Antisymmetric under a
/// community swap.
double share_flow(double s_a, double s_b, const CommunityParams& ca,
                  const CommunityParams& cb);

/// Full 12-dimensional right-hand side of the coupled two-community model.
/// Throws NonFiniteDerivativeError when an output is NaN/inf.
void coupled_rhs(double t, std::span<const double> y, std::span<double> dydt,
                 const EpidemicParams& ep, const CommunityParams& ca,
                 const CommunityParams& cb, const SharingParams& sh,
                 const ModelNumerics& num);

/// Pre-epidemic equilibrium: u = n-1, i = 1, rec = 0, d = d0, s = s_max,
/// p = p0 for each community.
SystemState initial_state(const EpidemicParams& ep, const CommunityParams& ca,
                          const CommunityParams& cb);

struct TrajectorySample {
  double t = 0.0;
  SystemState state{};
  double re_a = 0.0;          // effective reproduction number, community A
  double re_b = 0.0;
  double switch_value = 0.0;  // sharing gate actually applied
  double transfer_rate = 0.0; // switch * flow, positive into A, units/day
};

struct Trajectory {
  ScenarioParams params;
  std::vector<TrajectorySample> samples;
  /// True when both epidemics have burnt out by t_end (i <= 1 each).
  bool complete = false;
  /// True when integration stopped early; samples hold the prefix.
  bool failed = false;
  SolveStatus failure_status = SolveStatus::Ok;
  std::string failure;

  double t_start() const { return samples.empty() ? 0.0 : samples.front().t; }
  double t_end() const { return samples.empty() ? 0.0 : samples.back().t; }
};

/// Default per-component magnitudes used to scale abs_tol:
/// n for u/i/rec, p_max for d/p, s_max for s.
std::vector<double> default_abs_scales(const ScenarioParams& params);

/// Integration window implied by the onsets: start 5 days before the
/// earliest onset (and no later than -5), end `horizon` days after the
/// latest onset (and no earlier than +horizon).
double default_t_start(const ScenarioParams& params);
double default_t_end(const ScenarioParams& params, double horizon);

/// Integrates the coupled model and logs the auxiliary channels at every
/// dense sample. Never throws on numerical failure (failed flag instead).
Trajectory try_run_scenario(const EpidemicParams& ep, const CommunityParams& ca,
                            const CommunityParams& cb, const SharingParams& sh,
                            const ModelNumerics& num,
                            const IntegratorSettings& settings);

/// As try_run_scenario but propagates solver errors.
Trajectory run_scenario(const EpidemicParams& ep, const CommunityParams& ca,
                        const CommunityParams& cb, const SharingParams& sh,
                        const ModelNumerics& num,
                        const IntegratorSettings& settings);

}  // namespace epistock

#endif  // EPISTOCK_MODEL_HPP_
