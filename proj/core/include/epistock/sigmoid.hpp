#ifndef EPISTOCK_SIGMOID_HPP_
#define EPISTOCK_SIGMOID_HPP_

#include <cmath>

namespace epistock {

/// Logistic switching function 1 / (1 + exp(-k*x)).
///
/// The exponent argument is clamped to +-700 so that steep gates
/// (k up to ~1e3 on O(1) arguments, or unit gates on O(1e7) stock
/// levels) never overflow. Monotone in x, sigmoid(0, k) == 0.5, and
/// sigmoid(x, k) + sigmoid(-x, k) == 1 up to rounding.
inline double sigmoid(double x, double k = 1.0) {
  double a = k * x;
  if (a > 700.0) a = 700.0;
  if (a < -700.0) a = -700.0;
  return 1.0 / (1.0 + std::exp(-a));
}

}  // namespace epistock

#endif  // EPISTOCK_SIGMOID_HPP_
