#include "epistock/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "epistock/errors.hpp"

namespace epistock {

namespace {

constexpr const char* kEngineVersion = "epistock 0.1.0";

void apply_axis(ScenarioConfig& cfg, AxisParam p, double value) {
  switch (p) {
    case AxisParam::Theta:
      cfg.sharing.theta = value;
      break;
    case AxisParam::OnsetB:
      cfg.community_b.onset = value;
      break;
    case AxisParam::SMaxA:
      cfg.community_a.s_max = value;
      break;
    case AxisParam::SMaxB:
      cfg.community_b.s_max = value;
      break;
    case AxisParam::SMaxBoth:
      cfg.community_a.s_max = value;
      cfg.community_b.s_max = value;
      break;
  }
}

bool axes_overlap(AxisParam a, AxisParam b) {
  if (a == b) return true;
  auto touches_a = [](AxisParam p) {
    return p == AxisParam::SMaxA || p == AxisParam::SMaxBoth;
  };
  auto touches_b = [](AxisParam p) {
    return p == AxisParam::SMaxB || p == AxisParam::SMaxBoth;
  };
  return (touches_a(a) && touches_a(b)) || (touches_b(a) && touches_b(b));
}

}  // namespace

std::string to_string(AxisParam p) {
  switch (p) {
    case AxisParam::Theta:
      return "theta";
    case AxisParam::OnsetB:
      return "onset_b";
    case AxisParam::SMaxA:
      return "s_max_a";
    case AxisParam::SMaxB:
      return "s_max_b";
    case AxisParam::SMaxBoth:
      return "s_max_both";
  }
  return "theta";
}

AxisParam axis_param_from_string(const std::string& s) {
  if (s == "theta") return AxisParam::Theta;
  if (s == "onset_b") return AxisParam::OnsetB;
  if (s == "s_max_a") return AxisParam::SMaxA;
  if (s == "s_max_b") return AxisParam::SMaxB;
  if (s == "s_max_both") return AxisParam::SMaxBoth;
  throw AxisError("unknown sweep parameter: " + s);
}

double SweepAxis::value(std::size_t k) const {
  return min + static_cast<double>(k) * (max - min) /
                   static_cast<double>(steps - 1);
}

void SweepAxis::validate() const {
  if (steps < 2) throw AxisError("axis needs at least 2 steps");
  if (!(min < max)) throw AxisError("axis requires min < max");
  if (parameter == AxisParam::Theta && (min < 0.0 || max > 1.0)) {
    throw AxisError("theta axis must stay within [0, 1]");
  }
}

SweepResult run_sweep(const ScenarioConfig& base, const SweepAxis& ax,
                      const SweepAxis& ay, unsigned workers) {
  ax.validate();
  ay.validate();
  if (axes_overlap(ax.parameter, ay.parameter)) {
    throw ConfigError("sweep axes overlap: " + to_string(ax.parameter) +
                      " vs " + to_string(ay.parameter));
  }
  validate_config(base);

  SweepResult res;
  res.axis_x = ax;
  res.axis_y = ay;
  res.base = base;
  res.rel_tol = base.numerics.rel_tol;
  res.abs_tol = base.numerics.abs_tol;
  res.horizon = base.numerics.horizon;
  res.engine_version = kEngineVersion;

  const std::size_t total = ax.steps * ay.steps;
  res.points.resize(total);

  auto run_cell = [&](std::size_t index) {
    const std::size_t ix = index % ax.steps;
    const std::size_t iy = index / ax.steps;
    PhasePoint& pt = res.points[index];
    pt.x = ax.value(ix);
    pt.y = ay.value(iy);

    ScenarioConfig cfg = base;
    apply_axis(cfg, ax.parameter, pt.x);
    apply_axis(cfg, ay.parameter, pt.y);

    const ScenarioParams p = cfg.params();
    const Trajectory traj =
        try_run_scenario(p.epidemic, p.community_a, p.community_b, p.sharing,
                         p.numerics, cfg.integrator_settings());
    pt.summary = summarize(traj);
    pt.outcome = pt.summary.outcome;
  };

  const unsigned n_workers = std::max(1u, workers);
  if (n_workers == 1 || total <= 1) {
    for (std::size_t i = 0; i < total; ++i) run_cell(i);
  } else {
    // Static block partition; each cell writes only its own slot, so the
    // assembled grid is independent of scheduling.
    const std::size_t chunk = (total + n_workers - 1) / n_workers;
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
      const std::size_t begin = std::min(total, w * chunk);
      const std::size_t end = std::min(total, begin + chunk);
      if (begin == end) break;
      pool.emplace_back([&, begin, end] {
        for (std::size_t i = begin; i < end; ++i) run_cell(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  return res;
}

AsymmetryReport asymmetry_report(const SweepResult& res) {
  const bool onset_is_x = res.axis_x.parameter == AxisParam::OnsetB;
  const bool onset_is_y = res.axis_y.parameter == AxisParam::OnsetB;
  if (!onset_is_x && !onset_is_y) {
    throw AxisError("asymmetry report needs an onset_b axis");
  }
  const SweepAxis& onset = onset_is_x ? res.axis_x : res.axis_y;
  const SweepAxis& other = onset_is_x ? res.axis_y : res.axis_x;
  const double span_tol = 1e-9 * std::max(std::abs(onset.min), std::abs(onset.max));
  if (std::abs(onset.min + onset.max) > span_tol) {
    throw AxisError("onset_b axis must be symmetric about 0");
  }

  auto cell = [&](std::size_t onset_idx, std::size_t other_idx) -> const PhasePoint& {
    return onset_is_x ? res.at(onset_idx, other_idx)
                      : res.at(other_idx, onset_idx);
  };

  AsymmetryReport report;
  // Grid point k mirrors onto steps-1-k; walk the positive half downward
  // toward 0 so entries come out ascending in |dt|.
  for (std::size_t k = onset.steps; k-- > 0;) {
    const double dt = onset.value(k);
    const std::size_t mirror = onset.steps - 1 - k;
    if (!(dt > 0.0) || mirror == k) break;

    AsymmetryEntry entry;
    entry.dt_abs = dt;
    for (std::size_t j = 0; j < other.steps; ++j) {
      const PhasePoint& pos = cell(k, j);
      const PhasePoint& neg = cell(mirror, j);
      AsymmetryPairRow row;
      row.other_value = other.value(j);
      row.outcome_pos = pos.outcome;
      row.outcome_neg = neg.outcome;
      row.mean_pos = pos.summary.infected_ratio_mean;
      row.mean_neg = neg.summary.infected_ratio_mean;
      entry.max_mean_diff =
          std::max(entry.max_mean_diff, std::abs(row.mean_pos - row.mean_neg));
      auto swapped = [](OutcomeClass oc) {
        if (oc == OutcomeClass::WhiteA) return OutcomeClass::WhiteB;
        if (oc == OutcomeClass::WhiteB) return OutcomeClass::WhiteA;
        return oc;
      };
      if (row.outcome_pos != swapped(row.outcome_neg)) {
        entry.all_mirrored = false;
      }
      entry.rows.push_back(row);
    }
    report.entries.push_back(std::move(entry));
  }
  std::reverse(report.entries.begin(), report.entries.end());
  return report;
}

}  // namespace epistock
