#include "epistock/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace epistock {

namespace {

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

// Weighted RMS error norm; <= 1 means the step is acceptable.
double error_norm(std::span<const double> err, std::span<const double> y,
                  std::span<const double> y_new, const IntegratorSettings& s) {
  const std::size_t n = err.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = s.abs_scales.empty() ? 1.0 : s.abs_scales[i];
    const double tol = s.abs_tol * scale +
                       s.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    const double q = err[i] / tol;
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(n));
}

// Collects accepted steps into the dense output grid by linear
// interpolation. Sample j sits at t_start + j*dt; the exact end point is
// appended when it does not land on the grid.
class DenseSampler {
public:
  DenseSampler(const IntegratorSettings& s, std::span<const double> y0,
               SolveResult& out)
      : dt_(s.dense_output_dt), t_start_(s.t_start), t_end_(s.t_end), out_(out) {
    out_.times.push_back(t_start_);
    out_.states.emplace_back(y0.begin(), y0.end());
    next_ = 1;
  }

  void advance(double t_prev, std::span<const double> y_prev, double t_new,
               std::span<const double> y_new) {
    double t_sample = t_start_ + static_cast<double>(next_) * dt_;
    while (t_sample <= t_new + 1e-12 && t_sample <= t_end_ + 1e-12) {
      const double w =
          t_new == t_prev ? 1.0 : (t_sample - t_prev) / (t_new - t_prev);
      std::vector<double> y(y_prev.size());
      for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = y_prev[i] + w * (y_new[i] - y_prev[i]);
      }
      out_.times.push_back(std::min(t_sample, t_end_));
      out_.states.push_back(std::move(y));
      ++next_;
      t_sample = t_start_ + static_cast<double>(next_) * dt_;
    }
  }

  void finish(double t_final, std::span<const double> y_final) {
    if (out_.times.empty() || out_.times.back() < t_final - 1e-9) {
      out_.times.push_back(t_final);
      out_.states.emplace_back(y_final.begin(), y_final.end());
    }
  }

private:
  double dt_;
  double t_start_;
  double t_end_;
  std::size_t next_;
  SolveResult& out_;
};

// ---------------------------------------------------------------------------
// Dormand-Prince 4(5) embedded pair, FSAL.

constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                 kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
// Difference between the 5th and embedded 4th order weights.
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0,
                 kE4 = 71.0 / 1920.0, kE5 = -17253.0 / 339200.0,
                 kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;
constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0,
                 kC5 = 8.0 / 9.0;

SolveResult solve_rk45(const RhsFn& rhs, std::span<const double> y0,
                       const IntegratorSettings& s) {
  const std::size_t n = y0.size();
  SolveResult out;
  DenseSampler sampler(s, y0, out);

  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> y_new(n), err(n), tmp(n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);

  double t = s.t_start;
  double h = std::clamp(s.h_init, s.h_min, s.h_max);
  // PI step controller constants as in classic dopri5 implementations.
  const double beta = 0.04;
  const double expo1 = 0.2 - beta * 0.75;
  const double safety = 0.9;
  double facold = 1e-4;

  auto fail = [&](SolveStatus st, const std::string& msg) {
    sampler.finish(t, y);
    out.status = st;
    out.failure_time = t;
    out.message = msg;
    return out;
  };

  rhs(t, y, k1);
  if (!all_finite(k1)) {
    return fail(SolveStatus::NonFiniteState, "non-finite derivative at start");
  }

  while (t < s.t_end) {
    h = std::min(h, s.t_end - t);

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * kA21 * k1[i];
    rhs(t + kC2 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
    rhs(t + kC3 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
    rhs(t + kC4 * h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] +
                           kA54 * k4[i]);
    rhs(t + kC5 * h, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] +
                           kA64 * k4[i] + kA65 * k5[i]);
    rhs(t + h, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      y_new[i] = y[i] + h * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] +
                             kB5 * k5[i] + kB6 * k6[i]);
    rhs(t + h, y_new, k7);
    for (std::size_t i = 0; i < n; ++i)
      err[i] = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                    kE6 * k6[i] + kE7 * k7[i]);

    double norm = std::numeric_limits<double>::infinity();
    if (all_finite(y_new) && all_finite(err)) {
      norm = error_norm(err, y, y_new, s);
    }

    if (norm <= 1.0) {
      ++out.accepted_steps;
      const double t_new = t + h;
      sampler.advance(t, y, t_new, y_new);
      std::swap(y, y_new);
      std::swap(k1, k7);  // FSAL
      t = t_new;

      const double fac11 = std::pow(std::max(norm, 1e-16), expo1);
      // PI controller: growth capped at 10x, shrink at 0.2x per step.
      const double fac =
          std::clamp(fac11 / (std::pow(facold, beta) * safety), 0.1, 5.0);
      h = std::clamp(h / fac, s.h_min, s.h_max);
      facold = std::max(norm, 1e-4);
    } else {
      ++out.rejected_steps;
      double shrink;
      if (!std::isfinite(norm)) {
        shrink = 0.5;
      } else {
        shrink = std::max(0.1, safety * std::pow(norm, -expo1));
      }
      h *= shrink;
      if (h < s.h_min) {
        return fail(SolveStatus::StepUnderflow,
                    "step size underflow in rk45 controller");
      }
      if (!all_finite(y)) {
        return fail(SolveStatus::NonFiniteState, "non-finite state");
      }
    }
  }

  sampler.finish(t, y);
  return out;
}

// ---------------------------------------------------------------------------
// Two-stage L-stable Rosenbrock method (gamma = 1 + 1/sqrt(2)):
//   (I - gamma h J) k1 = f(y)
//   (I - gamma h J) k2 = f(y + h k1) - 2 k1
//   y1 = y + 1.5 h k1 + 0.5 h k2        (order 2)
//   error estimate: 0.5 h (k1 + k2)     (against the order-1 solution y + h k1)
// The raw estimate is filtered through (I - gamma h J)^-1 before it enters
// the norm, which discounts fast modes the L-stable step damps anyway;
// without the filter the controller throttles h on stiff equilibria.
// The Jacobian is evaluated by forward differences each step; the method
// retains order 2 for any Jacobian approximation.

class LuFactors {
public:
  explicit LuFactors(std::size_t n) : n_(n), a_(n * n), piv_(n) {}

  // Factors (I - c*J) in place. Returns false when singular.
  bool factor(const std::vector<double>& jac, double c) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        a_[i * n_ + j] = (i == j ? 1.0 : 0.0) - c * jac[i * n_ + j];
      }
    }
    for (std::size_t col = 0; col < n_; ++col) {
      std::size_t p = col;
      double best = std::abs(a_[col * n_ + col]);
      for (std::size_t r = col + 1; r < n_; ++r) {
        const double v = std::abs(a_[r * n_ + col]);
        if (v > best) {
          best = v;
          p = r;
        }
      }
      if (best == 0.0 || !std::isfinite(best)) return false;
      piv_[col] = p;
      if (p != col) {
        for (std::size_t j = 0; j < n_; ++j)
          std::swap(a_[col * n_ + j], a_[p * n_ + j]);
      }
      const double inv = 1.0 / a_[col * n_ + col];
      for (std::size_t r = col + 1; r < n_; ++r) {
        const double m = a_[r * n_ + col] * inv;
        a_[r * n_ + col] = m;
        if (m != 0.0) {
          for (std::size_t j = col + 1; j < n_; ++j)
            a_[r * n_ + j] -= m * a_[col * n_ + j];
        }
      }
    }
    return true;
  }

  void solve(std::vector<double>& b) const {
    for (std::size_t col = 0; col < n_; ++col) {
      if (piv_[col] != col) std::swap(b[col], b[piv_[col]]);
      for (std::size_t r = col + 1; r < n_; ++r)
        b[r] -= a_[r * n_ + col] * b[col];
    }
    for (std::size_t col = n_; col-- > 0;) {
      for (std::size_t j = col + 1; j < n_; ++j)
        b[col] -= a_[col * n_ + j] * b[j];
      b[col] /= a_[col * n_ + col];
    }
  }

private:
  std::size_t n_;
  std::vector<double> a_;
  std::vector<std::size_t> piv_;
};

SolveResult solve_rosenbrock2(const RhsFn& rhs, std::span<const double> y0,
                              const IntegratorSettings& s) {
  const std::size_t n = y0.size();
  const double gamma = 1.0 + 1.0 / std::sqrt(2.0);
  SolveResult out;
  DenseSampler sampler(s, y0, out);

  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> f0(n), k1(n), k2(n), tmp(n), y_new(n), err(n);
  std::vector<double> jac(n * n), ypert(n), fpert(n);
  LuFactors lu(n);

  double t = s.t_start;
  double h = std::clamp(s.h_init, s.h_min, s.h_max);
  const double safety = 0.9;

  auto fail = [&](SolveStatus st, const std::string& msg) {
    sampler.finish(t, y);
    out.status = st;
    out.failure_time = t;
    out.message = msg;
    return out;
  };

  const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());

  while (t < s.t_end) {
    h = std::min(h, s.t_end - t);

    rhs(t, y, f0);
    if (!all_finite(f0)) {
      return fail(SolveStatus::NonFiniteState, "non-finite derivative");
    }

    // Forward-difference Jacobian at (t, y).
    for (std::size_t j = 0; j < n; ++j) {
      const double scale = s.abs_scales.empty() ? 1.0 : s.abs_scales[j];
      const double delta =
          sqrt_eps * std::max({std::abs(y[j]), 1e-8 * scale, 1e-30});
      std::copy(y.begin(), y.end(), ypert.begin());
      ypert[j] += delta;
      rhs(t, ypert, fpert);
      const double inv = 1.0 / delta;
      for (std::size_t i = 0; i < n; ++i) {
        jac[i * n + j] = (fpert[i] - f0[i]) * inv;
      }
    }

    bool accepted = false;
    while (!accepted) {
      bool ok = lu.factor(jac, gamma * h);
      double norm = std::numeric_limits<double>::infinity();
      if (ok) {
        std::copy(f0.begin(), f0.end(), k1.begin());
        lu.solve(k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k1[i];
        rhs(t + h, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) k2[i] -= 2.0 * k1[i];
        lu.solve(k2);
        for (std::size_t i = 0; i < n; ++i) {
          y_new[i] = y[i] + h * (1.5 * k1[i] + 0.5 * k2[i]);
          err[i] = 0.5 * h * (k1[i] + k2[i]);
        }
        lu.solve(err);
        if (all_finite(y_new) && all_finite(err)) {
          norm = error_norm(err, y, y_new, s);
        }
      }

      if (norm <= 1.0) {
        ++out.accepted_steps;
        const double t_new = t + h;
        sampler.advance(t, y, t_new, y_new);
        std::swap(y, y_new);
        t = t_new;
        const double grow =
            std::clamp(safety * std::pow(std::max(norm, 1e-16), -0.5), 0.2, 6.0);
        h = std::clamp(h * grow, s.h_min, s.h_max);
        accepted = true;
      } else {
        ++out.rejected_steps;
        const double shrink =
            std::isfinite(norm)
                ? std::clamp(safety * std::pow(norm, -0.5), 0.1, 0.5)
                : 0.25;
        h *= shrink;
        if (h < s.h_min) {
          return fail(SolveStatus::StepUnderflow,
                      "step size underflow in rosenbrock controller");
        }
      }
    }
  }

  sampler.finish(t, y);
  return out;
}

}  // namespace

void IntegratorSettings::validate() const {
  if (!(h_min > 0.0) || !(h_min <= h_init) || !(h_init <= h_max)) {
    throw ValidationError("integrator", "requires 0 < h_min <= h_init <= h_max");
  }
  if (!(rel_tol > 0.0)) throw ValidationError("integrator.rel_tol", "must be > 0");
  if (!(abs_tol > 0.0)) throw ValidationError("integrator.abs_tol", "must be > 0");
  if (!(t_end > t_start)) {
    throw ValidationError("integrator.t_end", "must exceed t_start");
  }
  if (!(dense_output_dt > 0.0)) {
    throw ValidationError("integrator.dense_output_dt", "must be > 0");
  }
}

SolveResult try_integrate(const RhsFn& rhs, std::span<const double> y0,
                          const IntegratorSettings& settings) {
  settings.validate();
  if (!settings.abs_scales.empty() && settings.abs_scales.size() != y0.size()) {
    throw ValidationError("integrator.abs_scales",
                          "dimension does not match the state vector");
  }
  switch (settings.method) {
    case SolverMethod::Rosenbrock2:
      return solve_rosenbrock2(rhs, y0, settings);
    case SolverMethod::Rk45Dopri:
    default:
      return solve_rk45(rhs, y0, settings);
  }
}

SolveResult integrate(const RhsFn& rhs, std::span<const double> y0,
                      const IntegratorSettings& settings) {
  SolveResult res = try_integrate(rhs, y0, settings);
  switch (res.status) {
    case SolveStatus::Ok:
      return res;
    case SolveStatus::StepUnderflow:
      throw StepUnderflowError(res.message, res.failure_time);
    case SolveStatus::NonFiniteState:
    default:
      throw NonFiniteStateError(res.message, res.failure_time);
  }
}

}  // namespace epistock
