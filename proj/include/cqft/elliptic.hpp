#pragma once

#include <cmath>
#include <numbers>

#include "cqft/errors.hpp"

namespace cqft {

/// Complete elliptic integral of the first kind K(x), modulus convention
/// K(x) = int_0^{pi/2} dt / sqrt(1 - x^2 sin^2 t), via the arithmetic-geometric mean.
inline double elliptic_K(double x) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("elliptic_K requires 0 <= x < 1");
  double g0 = 1.0;
  double g1 = std::sqrt((1.0 - x) * (1.0 + x));
  for (int i = 0; i < 64 && std::abs(g0 - g1) > 1e-16 * g0; ++i) {
    const double next = 0.5 * (g0 + g1);
    g1 = std::sqrt(g0 * g1);
    g0 = next;
  }
  return std::numbers::pi / (2.0 * g0);
}

}  // namespace cqft
