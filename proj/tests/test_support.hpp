#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "cqft/kinematics.hpp"

namespace cqft::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240611u);
  return engine;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

/// Uniform momentum strictly inside the zone.
inline Momentum random_momentum(const LatticeParams& params) {
  std::vector<double> p(params.d());
  for (auto& x : p) x = uniform(-0.999 * pi / params.a(), 0.999 * pi / params.a());
  return Momentum(std::move(p));
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

inline double abs_err(std::complex<double> got, std::complex<double> want) { return std::abs(got - want); }

}  // namespace cqft::testing
