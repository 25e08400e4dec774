#pragma once

// Discrete-spacetime Feynman propagator of the Shift circuit.

#include <cmath>
#include <complex>
#include <vector>

#include "cqft/errors.hpp"
#include "cqft/kinematics.hpp"
#include "cqft/quadrature.hpp"

namespace cqft {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};

/// Where the i epsilon is placed. `Denominator` adds +i epsilon (dimensionless)
/// to the denominator; `ShiftedTheta` replaces theta by theta - i epsilon
/// (epsilon in 1/time).
enum class IEpsilon { Denominator, ShiftedTheta };

struct PropagatorQuery {
  LatticeParams params;
  double p0 = 0.0;
  Momentum p;
  double epsilon = 1e-3;
  IEpsilon prescription = IEpsilon::Denominator;
};

/// cos(theta_eps dt) for theta_eps = theta - i eps.
inline cplx shifted_cosine(double c, double eps_dt) {
  const double s = detail::checked_sine(c);
  return c * std::cosh(eps_dt) + I * s * std::sinh(eps_dt);
}

/// Denominator form of D_F given c(p) directly; no zone checks.
inline cplx feynman_from_cosine(double c, double p0, double dt, double eps) {
  return 0.5 * dt * dt * I / cplx(c - std::cos(p0 * dt), eps);
}

/// D_F(p) = (dt^2 / 2) i / (cos(theta dt) - cos(p0 dt) + i eps).
inline cplx feynman_momentum(const PropagatorQuery& q) {
  const auto& params = q.params;
  const double h = params.dt();
  detail::require(std::isfinite(q.epsilon) && q.epsilon > 0.0, "epsilon must be positive");
  detail::require(q.p0 * h > -pi && q.p0 * h <= pi * (1.0 + 1e-12),
                  "p0 outside the frequency zone (-pi/dt, pi/dt]");
  const double c = cosine_symbol(params, q.p);
  const cplx denom = q.prescription == IEpsilon::Denominator
                         ? cplx(c - std::cos(q.p0 * h), q.epsilon)
                         : shifted_cosine(c, q.epsilon * h) - std::cos(q.p0 * h);
  return 0.5 * h * h * I / denom;
}

struct ContourIdentity {
  cplx lhs;         ///< exp(-i theta_eps |t|) / sin(theta_eps dt)
  cplx rhs;         ///< dt int dp0/2pi  i exp(-i p0 t) / (cos(theta_eps dt) - cos(p0 dt))
  double residual;  ///< |rhs - lhs| / |lhs|
  double change;    ///< |rhs(n) - rhs(n/2)|
};

/// Checks the contour identity with t = t_steps * dt and theta_eps = theta - i epsilon.
/// `n_quad` (a power of two) nodes; the n_quad / 2 rule must agree to `tol`.
inline ContourIdentity contour_identity(const LatticeParams& params, const Momentum& p, int t_steps,
                                        double epsilon, std::size_t n_quad, double tol = 1e-8) {
  detail::require(params.m() > 0.0, "contour identity requires m > 0");
  detail::require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be positive");
  const double h = params.dt();
  const double c = cosine_symbol(params, p);
  const double theta = dispersion_theta(params, p);
  const cplx ce = shifted_cosine(c, epsilon * h);
  const cplx theta_eps(theta, -epsilon);
  const double t = t_steps * h;

  auto rule = [&](std::size_t n) {
    const auto integrand = [&](double p0) { return I * std::exp(-I * p0 * t) / (ce - std::cos(p0 * h)); };
    return h * periodic_trapezoid<cplx>(integrand, pi / h, n) / (2.0 * pi);
  };
  const auto r = doubling_check<cplx>(rule, n_quad, tol);
  const cplx lhs = std::exp(-I * theta_eps * std::abs(t)) / std::sin(theta_eps * h);
  return {lhs, r.value, std::abs(r.value - lhs) / std::abs(lhs), r.change};
}

inline double contour_identity_residual(const LatticeParams& params, const Momentum& p, int t_steps,
                                        double epsilon, std::size_t n_quad, double tol = 1e-8) {
  return contour_identity(params, p, t_steps, epsilon, n_quad, tol).residual;
}

struct EqualTimeResult {
  double value;      ///< real part of the quadrature
  double imag;       ///< residual imaginary part (cancels between p and -p)
  double change;     ///< difference to the L_quad / 2 rule
  std::size_t nodes; ///< nodes per dimension
};

/// <0| phi(x) phi(y) |0> = int d^dp/(2pi)^d exp(i p.(x - y)) / (2 omega(p)),
/// with x - y given in lattice units. `L_quad` nodes per dimension.
inline EqualTimeResult equal_time(const LatticeParams& params, const std::vector<int>& offset,
                                  std::size_t L_quad, double tol = 1e-12) {
  detail::require(params.m() > 0.0, "equal-time propagator requires m > 0");
  detail::require(offset.size() == static_cast<std::size_t>(params.d()), "offset dimension mismatch");
  const double a = params.a();
  const std::vector<double> half(params.d(), pi / a);
  auto rule = [&](std::size_t n) {
    const auto integrand = [&](std::span<const double> k) {
      double c = params.M(), phase = 0.0;
      for (std::size_t i = 0; i < k.size(); ++i) {
        c *= std::cos(k[i] * a);
        phase += k[i] * offset[i] * a;
      }
      const double w = detail::checked_sine(c) / params.dt();
      return std::polar(1.0, phase) / (2.0 * w);
    };
    return periodic_trapezoid_nd<cplx>(integrand, half, n) / std::pow(2.0 * pi, params.d());
  };
  const auto r = doubling_check<cplx>(rule, L_quad, tol);
  return {r.value.real(), r.value.imag(), r.change, r.nodes};
}

inline EqualTimeResult equal_time(const LatticeParams& params, int offset, std::size_t L_quad, double tol = 1e-12) {
  return equal_time(params, std::vector<int>{offset}, L_quad, tol);
}

/// Position-space propagator G(t, x) = int d^Dp/(2pi)^D exp(-i p0 t + i p.x) D_F(p)
/// by a tensor trapezoid rule (n_p0 frequency nodes, n_p nodes per spatial dimension).
inline cplx feynman_position(const LatticeParams& params, int t_steps, const std::vector<int>& offset,
                             double epsilon, std::size_t n_p0, std::size_t n_p) {
  detail::require(offset.size() == static_cast<std::size_t>(params.d()), "offset dimension mismatch");
  detail::require(epsilon > 0.0, "epsilon must be positive");
  detail::require(n_p0 >= 1 && n_p >= 1, "node counts must be positive");
  const double a = params.a(), h = params.dt();
  const double t = t_steps * h;
  const std::vector<double> half(params.d(), pi / a);
  // Inner p0 integral per spatial momentum, then the spatial rule.
  const auto spatial = [&](std::span<const double> k) {
    double c = params.M(), phase = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      c *= std::cos(k[i] * a);
      phase += k[i] * offset[i] * a;
    }
    const auto temporal = [&](double p0) { return std::exp(-I * p0 * t) * feynman_from_cosine(c, p0, h, epsilon); };
    return std::polar(1.0, phase) * periodic_trapezoid<cplx>(temporal, pi / h, n_p0) / (2.0 * pi);
  };
  return periodic_trapezoid_nd<cplx>(spatial, half, n_p) / std::pow(2.0 * pi, params.d());
}

}  // namespace cqft
