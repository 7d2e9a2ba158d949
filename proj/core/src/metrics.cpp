#include "epistock/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epistock {

namespace {

std::size_t offset(Community c) {
  return c == Community::A ? 0 : kCommunityB;
}

const CommunityParams& community(const Trajectory& traj, Community c) {
  return c == Community::A ? traj.params.community_a : traj.params.community_b;
}

}  // namespace

std::string to_string(OutcomeClass oc) {
  switch (oc) {
    case OutcomeClass::Red:
      return "RED";
    case OutcomeClass::WhiteA:
      return "WHITE_A";
    case OutcomeClass::WhiteB:
      return "WHITE_B";
    case OutcomeClass::Blue:
      return "BLUE";
  }
  return "BLUE";
}

OutcomeClass outcome_from_string(const std::string& s) {
  if (s == "RED") return OutcomeClass::Red;
  if (s == "WHITE_A") return OutcomeClass::WhiteA;
  if (s == "WHITE_B") return OutcomeClass::WhiteB;
  if (s == "BLUE") return OutcomeClass::Blue;
  throw std::invalid_argument("unknown outcome class: " + s);
}

double infected_ratio(const Trajectory& traj, Community c) {
  if (traj.samples.empty()) return 0.0;
  const double n = community(traj, c).n;
  const double u_end = traj.samples.back().state[offset(c) + kU];
  return (n - u_end) / n;
}

double min_stock_ratio(const Trajectory& traj, Community c) {
  const double s_max = community(traj, c).s_max;
  double lo = 1.0;
  for (const auto& sample : traj.samples) {
    lo = std::min(lo, sample.state[offset(c) + kS] / s_max);
  }
  return lo;
}

bool stock_depleted(const Trajectory& traj, Community c, double delta) {
  if (!(delta > 0.0) || delta > 0.05) {
    throw std::invalid_argument("depletion delta must lie in (0, 0.05]");
  }
  return min_stock_ratio(traj, c) < delta;
}

double peak_infected(const Trajectory& traj, Community c) {
  double hi = 0.0;
  for (const auto& sample : traj.samples) {
    hi = std::max(hi, sample.state[offset(c) + kI]);
  }
  return hi;
}

OutcomeClass classify(bool depleted_a, bool depleted_b) {
  if (depleted_a && depleted_b) return OutcomeClass::Red;
  if (depleted_a) return OutcomeClass::WhiteA;
  if (depleted_b) return OutcomeClass::WhiteB;
  return OutcomeClass::Blue;
}

double unserved_infected_ratio(const Trajectory& traj, Community c,
                               double cap_fraction) {
  if (!(cap_fraction > 0.0) || cap_fraction > 1.0) {
    throw std::invalid_argument("cap fraction must lie in (0, 1]");
  }
  const std::size_t m = traj.samples.size();
  if (m < 2) return 0.0;

  const std::size_t off = offset(c);
  const double n = community(traj, c).n;
  const double cap = cap_fraction * n;

  // New-infection rate d(i+rec)/dt by central differences, masked to the
  // samples where the number of infected exceeds the healthcare cap.
  std::vector<double> rate(m, 0.0);
  auto cumulative = [&](std::size_t k) {
    const auto& st = traj.samples[k].state;
    return st[off + kI] + st[off + kRec];
  };
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == m ? k : k + 1;
    const double dt = traj.samples[hi].t - traj.samples[lo].t;
    if (dt <= 0.0) continue;
    const double flux = (cumulative(hi) - cumulative(lo)) / dt;
    if (traj.samples[k].state[off + kI] > cap) {
      rate[k] = std::max(0.0, flux);
    }
  }

  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double dt = traj.samples[k + 1].t - traj.samples[k].t;
    integral += 0.5 * (rate[k] + rate[k + 1]) * dt;
  }
  return std::min(integral / n, infected_ratio(traj, c));
}

ScenarioSummary summarize(const Trajectory& traj, double delta,
                          double cap_fraction) {
  ScenarioSummary s;
  s.infected_ratio_a = infected_ratio(traj, Community::A);
  s.infected_ratio_b = infected_ratio(traj, Community::B);
  s.infected_ratio_mean = 0.5 * (s.infected_ratio_a + s.infected_ratio_b);
  s.min_stock_ratio_a = min_stock_ratio(traj, Community::A);
  s.min_stock_ratio_b = min_stock_ratio(traj, Community::B);
  s.depleted_a = s.min_stock_ratio_a < delta;
  s.depleted_b = s.min_stock_ratio_b < delta;
  s.unserved_ratio_a = unserved_infected_ratio(traj, Community::A, cap_fraction);
  s.unserved_ratio_b = unserved_infected_ratio(traj, Community::B, cap_fraction);
  s.peak_infected_a = peak_infected(traj, Community::A);
  s.peak_infected_b = peak_infected(traj, Community::B);
  s.complete = traj.complete && !traj.failed;
  s.outcome = classify(s.depleted_a, s.depleted_b);
  return s;
}

}  // namespace epistock
