#ifndef EPISTOCK_SOLVER_HPP_
#define EPISTOCK_SOLVER_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "epistock/errors.hpp"

namespace epistock {

/// Right-hand side of an autonomous-in-shape ODE system:
/// fills dydt with f(t, y). Dimensions of y and dydt match y0.
using RhsFn = std::function<void(double t, std::span<const double> y,
                                 std::span<double> dydt)>;

enum class SolverMethod {
  /// Embedded explicit Dormand-Prince 4(5) pair with PI step control.
  /// Good default for smooth, non-stiff right-hand sides.
  Rk45Dopri,
  /// Two-stage L-stable Rosenbrock method with step-size control.
  /// Handles the fast relaxation modes that appear when a stock is
  /// pinned against a steep sigmoid gate; used for scenario runs.
  Rosenbrock2,
};

struct IntegratorSettings {
  double rel_tol = 1e-6;
  double abs_tol = 1e-6;
  double h_init = 1e-3;   // days
  double h_min = 1e-12;   // days
  double h_max = 0.25;    // days
  double t_start = 0.0;   // days
  double t_end = 600.0;   // days
  double dense_output_dt = 0.5;  // days, sampling interval of the output
  SolverMethod method = SolverMethod::Rk45Dopri;
  /// Per-component typical magnitudes. abs_tol is applied as
  /// abs_tol * abs_scales[i]; empty means all ones.
  std::vector<double> abs_scales;

  /// Throws ValidationError when the step/tolerance invariants are broken.
  void validate() const;
};

enum class SolveStatus {
  Ok,
  StepUnderflow,    // required step fell below h_min
  NonFiniteState,   // a state component or derivative became NaN/inf
};

/// Dense-sampled solution. `times`/`states` hold one entry per output
/// sample at t_start + j*dense_output_dt plus the exact end time. On
/// failure the sampled prefix up to the failure time is retained.
struct SolveResult {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  SolveStatus status = SolveStatus::Ok;
  double failure_time = 0.0;
  std::string message;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  bool ok() const { return status == SolveStatus::Ok; }
};

/// Integrates y' = rhs(t, y) from settings.t_start to settings.t_end with
/// adaptive step-size control, returning the trajectory sampled every
/// dense_output_dt (linear interpolation between accepted steps). Never
/// throws on numerical failure; inspect result.status.
SolveResult try_integrate(const RhsFn& rhs, std::span<const double> y0,
                          const IntegratorSettings& settings);

/// As try_integrate, but raises StepUnderflowError / NonFiniteStateError.
SolveResult integrate(const RhsFn& rhs, std::span<const double> y0,
                      const IntegratorSettings& settings);

}  // namespace epistock

#endif  // EPISTOCK_SOLVER_HPP_
