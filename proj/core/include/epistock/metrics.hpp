#ifndef EPISTOCK_METRICS_HPP_
#define EPISTOCK_METRICS_HPP_

#include <string>

#include "epistock/model.hpp"

namespace epistock {

enum class Community { A, B };

/// Qualitative end state of a scenario: Red = both stocks depleted,
/// WhiteA/WhiteB = exactly that community depleted, Blue = neither.
enum class OutcomeClass { Red, WhiteA, WhiteB, Blue };

std::string to_string(OutcomeClass oc);
OutcomeClass outcome_from_string(const std::string& s);

/// Default stock-ratio band below which a community counts as depleted.
inline constexpr double kDepletionDelta = 1e-3;
/// Default healthcare capacity as a fraction of the population.
inline constexpr double kHealthcareCap = 0.05;

/// Fraction of the population ever infected: (n - u(t_end)) / n.
double infected_ratio(const Trajectory& traj, Community c);

/// True when min over samples of s(t)/s_max falls below delta.
bool stock_depleted(const Trajectory& traj, Community c,
                    double delta = kDepletionDelta);

/// Minimum of s(t)/s_max over the trajectory.
double min_stock_ratio(const Trajectory& traj, Community c);

/// Maximum of i(t) over the trajectory.
double peak_infected(const Trajectory& traj, Community c);

OutcomeClass classify(bool depleted_a, bool depleted_b);

/// Fraction of the population infected while the number of simultaneously
/// infected exceeded cap_fraction * n: the new-infection flux d(i+rec)/dt
/// is estimated from the samples and integrated by the trapezoid rule over
/// the over-cap region.
double unserved_infected_ratio(const Trajectory& traj, Community c,
                               double cap_fraction = kHealthcareCap);

struct ScenarioSummary {
  double infected_ratio_a = 0.0;
  double infected_ratio_b = 0.0;
  double infected_ratio_mean = 0.0;
  bool depleted_a = false;
  bool depleted_b = false;
  double min_stock_ratio_a = 0.0;
  double min_stock_ratio_b = 0.0;
  double unserved_ratio_a = 0.0;
  double unserved_ratio_b = 0.0;
  double peak_infected_a = 0.0;
  double peak_infected_b = 0.0;
  bool complete = false;
  OutcomeClass outcome = OutcomeClass::Blue;
};

ScenarioSummary summarize(const Trajectory& traj,
                          double delta = kDepletionDelta,
                          double cap_fraction = kHealthcareCap);

}  // namespace epistock

#endif  // EPISTOCK_METRICS_HPP_
