#ifndef EPISTOCK_SWEEP_HPP_
#define EPISTOCK_SWEEP_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "epistock/config.hpp"
#include "epistock/metrics.hpp"

namespace epistock {

/// Parameters a sweep axis may vary.
enum class AxisParam { Theta, OnsetB, SMaxA, SMaxB, SMaxBoth };

std::string to_string(AxisParam p);
AxisParam axis_param_from_string(const std::string& s);

struct SweepAxis {
  AxisParam parameter = AxisParam::Theta;
  double min = 0.0;
  double max = 1.0;
  std::size_t steps = 2;

  /// Grid coordinate k in [0, steps): min + k * (max - min) / (steps - 1).
  double value(std::size_t k) const;
  /// Throws AxisError when steps < 2, min >= max, or a theta axis leaves
  /// [0, 1].
  void validate() const;
};

struct PhasePoint {
  double x = 0.0;
  double y = 0.0;
  ScenarioSummary summary;
  OutcomeClass outcome = OutcomeClass::Blue;
};

struct SweepResult {
  SweepAxis axis_x;
  SweepAxis axis_y;
  ScenarioConfig base;
  /// Row-major: points[iy * axis_x.steps + ix].
  std::vector<PhasePoint> points;
  // Engine metadata recorded with the result.
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  double horizon = 0.0;
  std::string engine_version;

  const PhasePoint& at(std::size_t ix, std::size_t iy) const {
    return points[iy * axis_x.steps + ix];
  }
};

/// Evaluates the scenario at every grid cell. Cells run in parallel on
/// `workers` threads; each cell writes its pre-indexed slot, so the result
/// is identical for any worker count. A failing integration marks that
/// cell incomplete instead of aborting the sweep. Throws ConfigError when
/// the axes overlap (touch the same underlying parameter).
SweepResult run_sweep(const ScenarioConfig& base, const SweepAxis& ax,
                      const SweepAxis& ay, unsigned workers);

/// One mirrored pair of grid cells at the same |onset_b|.
struct AsymmetryPairRow {
  double other_value = 0.0;   // coordinate on the non-onset axis
  OutcomeClass outcome_pos = OutcomeClass::Blue;  // at +|dt|
  OutcomeClass outcome_neg = OutcomeClass::Blue;  // at -|dt|
  double mean_pos = 0.0;      // infected_ratio_mean at +|dt|
  double mean_neg = 0.0;
};

struct AsymmetryEntry {
  double dt_abs = 0.0;
  std::vector<AsymmetryPairRow> rows;
  double max_mean_diff = 0.0;
  /// True when every pair is label-swap mirrored (WhiteA <-> WhiteB).
  bool all_mirrored = true;
};

struct AsymmetryReport {
  std::vector<AsymmetryEntry> entries;  // ascending |dt|, excluding dt == 0
};

/// Pairs cells at (+dt, -dt). Requires one axis to be onset_b spanning a
/// symmetric range about 0 (min == -max); throws AxisError otherwise.
AsymmetryReport asymmetry_report(const SweepResult& res);

}  // namespace epistock

#endif  // EPISTOCK_SWEEP_HPP_
