#pragma once

#include <cmath>

namespace ironclad {

// The single numeric kernel for delay-bound exponentials.  (1-x)^n is
// evaluated as exp(n*log1p(-x)); repeated multiplication underflows long
// before n reaches the delay magnitudes this library accepts (n ~ 1e13).
inline double pow_one_minus(double x, double n) {
  if (x <= 0.0) return x == 0.0 ? 1.0 : std::pow(1.0 - x, n);
  if (x >= 1.0) return n == 0.0 ? 1.0 : 0.0;
  return std::exp(n * std::log1p(-x));
}

// 1 - (1-x)^n without cancellation when the power is close to one.
inline double one_minus_pow_one_minus(double x, double n) {
  if (x <= 0.0) return x == 0.0 ? 0.0 : 1.0 - std::pow(1.0 - x, n);
  if (x >= 1.0) return n == 0.0 ? 0.0 : 1.0;
  return -std::expm1(n * std::log1p(-x));
}

}  // namespace ironclad
