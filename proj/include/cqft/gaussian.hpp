#pragma once

// Free (lambda = 0) circuits as linear symplectic maps.
//
// A linear observable u.phi + v.pi is stored as its coefficient vector (u; v).
// One circuit step in the Heisenberg picture maps coefficient vectors linearly;
// the matrices below act on these vectors, so column j is the image of the
// j-th basis observable.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>

#include "cqft/errors.hpp"
#include "cqft/kinematics.hpp"

namespace cqft {

enum class CircuitKind { Shift, Strang };

inline const char* to_string(CircuitKind k) { return k == CircuitKind::Shift ? "shift" : "strang"; }

struct MomentumBlock {
  Eigen::Matrix2d matrix;
  LatticeParams params;
  Momentum p;

  double determinant() const { return matrix.determinant(); }
  double half_trace() const { return 0.5 * matrix.trace(); }

  /// Eigenphase phi in (0, pi) of a stable block (eigenvalues e^{-+ i phi}).
  double eigenphase() const {
    const double c = half_trace();
    return std::atan2(detail::checked_sine(c), c);
  }
  /// Eigenphase divided by dt.
  double theta() const { return eigenphase() / params.dt(); }
};

struct ModeData {
  std::complex<double> alpha;
  std::complex<double> beta;
  double theta;
  double omega;
};

/// Per-momentum Shift step [[c, (c^2 - 1)/a], [a, c]].
inline MomentumBlock shift_block(const LatticeParams& params, const Momentum& p) {
  const double c = cosine_symbol(params, p);
  const double a = params.a();
  Eigen::Matrix2d b;
  b << c, (c - 1.0) * (c + 1.0) / a, a, c;
  return {b, params, p};
}

/// Per-momentum Strang step: half X-shear, full P-shear, half X-shear.
inline MomentumBlock strang_block(const LatticeParams& params, const Momentum& p) {
  const double K = laplacian_symbol(params, p);
  const double h = params.dt();
  Eigen::Matrix2d x, q;
  x << 1.0, -0.5 * h * K, 0.0, 1.0;
  q << 1.0, 0.0, h, 1.0;
  return {x * q * x, params, p};
}

inline MomentumBlock circuit_block(const LatticeParams& params, const Momentum& p, CircuitKind kind) {
  return kind == CircuitKind::Shift ? shift_block(params, p) : strang_block(params, p);
}

/// alpha = sqrt(sin(theta dt) / (2 dt)), beta = i sqrt(dt / (2 sin(theta dt))).
inline ModeData bogoliubov_modes(const LatticeParams& params, const Momentum& p) {
  const double c = cosine_symbol(params, p);
  const double s = detail::checked_sine(c);
  const double h = params.dt();
  return {std::complex<double>(std::sqrt(s / (2.0 * h)), 0.0),
          std::complex<double>(0.0, std::sqrt(h / (2.0 * s))), std::atan2(s, c) / h, s / h};
}

/// Real-space one-step map on a periodic chain of L sites (d = 1). Index
/// layout: u_0..u_{L-1}, v_0..v_{L-1}.
struct RealSpaceMap {
  Eigen::MatrixXd matrix;
  CircuitKind kind;
  LatticeParams params;
  int L;

  /// Canonical form J = [[0, 1], [-1, 0]] on (u; v).
  static Eigen::MatrixXd symplectic_form(int L) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * L, 2 * L);
    J.topRightCorner(L, L).setIdentity();
    J.bottomLeftCorner(L, L) = -Eigen::MatrixXd::Identity(L, L);
    return J;
  }

  double symplectic_defect() const { return symplectic_defect(matrix); }

  static double symplectic_defect(const Eigen::MatrixXd& S) {
    const auto J = symplectic_form(static_cast<int>(S.rows() / 2));
    return (S.transpose() * J * S - J).cwiseAbs().maxCoeff();
  }

  /// S^tau, multiplied left to right in a fixed order.
  Eigen::MatrixXd power(int tau) const {
    detail::require(tau >= 0, "tau must be non-negative");
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(2 * L, 2 * L);
    for (int t = 0; t < tau; ++t) r = matrix * r;
    return r;
  }

  /// Fourier block of a block-circulant matrix at the k-th grid momentum.
  static Eigen::Matrix2cd fourier_block(const Eigen::MatrixXd& S, int L, double a, double p) {
    Eigen::Matrix2cd b = Eigen::Matrix2cd::Zero();
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s)
        for (int j = 0; j < L; ++j)
          b(r, s) += S(r * L, s * L + j) * std::polar(1.0, p * j * a);
    return b;
  }
};

namespace detail {

inline int wrap_site(int n, int L) { return ((n % L) + L) % L; }

/// u += shear * (hopping v); hopping given by on-site and nearest-neighbour weights.
inline Eigen::MatrixXd x_shear(int L, double onsite, double neighbour) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Identity(2 * L, 2 * L);
  for (int k = 0; k < L; ++k) {
    X(k, L + k) += onsite;
    X(k, L + wrap_site(k + 1, L)) += neighbour;
    X(k, L + wrap_site(k - 1, L)) += neighbour;
  }
  return X;
}

}  // namespace detail

inline RealSpaceMap realspace_map(const LatticeParams& params, int L, CircuitKind kind) {
  detail::require(params.d() == 1, "real-space maps are implemented for d = 1 only");
  detail::require(L >= 2, "real-space maps need L >= 2");
  const double a = params.a();
  const double h = params.dt();
  Eigen::MatrixXd X, P = Eigen::MatrixXd::Zero(2 * L, 2 * L);
  if (kind == CircuitKind::Shift) {
    // W_X: u_k += (M / 2a)(v_{k+1} + v_{k-1}); W_P: (u, v) -> (-v / a, a u).
    X = detail::x_shear(L, 0.0, params.M() / (2.0 * a));
    P.topRightCorner(L, L) = -Eigen::MatrixXd::Identity(L, L) / a;
    P.bottomLeftCorner(L, L) = a * Eigen::MatrixXd::Identity(L, L);
  } else {
    // Curvature m^2 + (2 - shifts) / a^2, half step; P-shear v += dt u.
    const double m2 = params.m() * params.m();
    X = detail::x_shear(L, -0.5 * h * (m2 + 2.0 / (a * a)), 0.5 * h / (a * a));
    P.setIdentity();
    P.bottomLeftCorner(L, L) = h * Eigen::MatrixXd::Identity(L, L);
  }
  return {X * P * X, kind, params, L};
}

/// Coefficient vector of the discrete mover (pi_n -+ (phi_{n+1} - phi_{n-1}) / 2a) / 2.
/// `left` selects the left-moving combination.
inline Eigen::VectorXd mover_functional(const LatticeParams& params, int L, int n, bool left) {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * L);
  const double w = (left ? 1.0 : -1.0) / (4.0 * params.a());
  z(L + detail::wrap_site(n, L)) += 0.5;
  z(detail::wrap_site(n + 1, L)) += w;
  z(detail::wrap_site(n - 1, L)) -= w;
  return z;
}

/// max over sites and both movers of |S mover_n - mover_{n +- 1}|, for any mass.
inline double mover_shift_residual(const LatticeParams& params, int L) {
  const auto S = realspace_map(params, L, CircuitKind::Shift).matrix;
  double worst = 0.0;
  for (int n = 0; n < L; ++n) {
    const Eigen::VectorXd dl = S * mover_functional(params, L, n, true) - mover_functional(params, L, n + 1, true);
    const Eigen::VectorXd dr = S * mover_functional(params, L, n, false) - mover_functional(params, L, n - 1, false);
    worst = std::max({worst, dl.cwiseAbs().maxCoeff(), dr.cwiseAbs().maxCoeff()});
  }
  return worst;
}

/// Exact mover shift check; only meaningful for the massless free Shift circuit.
inline double mover_shift_check(const LatticeParams& params, int L) {
  detail::require(params.m() == 0.0, "mover shift check requires m = 0");
  detail::require(params.lambda() == 0.0, "mover shift check requires lambda = 0");
  return mover_shift_residual(params, L);
}

enum class PerturbationComponent { Field, Momentum };

inline constexpr double support_threshold = 1e-13;

/// Evolves the single-site observable phi_0 (or pi_0) for tau steps and
/// returns the largest periodic distance carrying a coefficient above 1e-13.
inline int lightcone_radius(const LatticeParams& params, int L, CircuitKind kind, int tau,
                            PerturbationComponent component = PerturbationComponent::Field) {
  detail::require(tau >= 0, "tau must be non-negative");
  if (!(L > 4 * tau + 2))
    throw LatticeTooSmall("lightcone needs L > 4 tau + 2 (L=" + std::to_string(L) +
                          ", tau=" + std::to_string(tau) + ")");
  const auto S = realspace_map(params, L, kind).matrix;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * L);
  z(component == PerturbationComponent::Field ? 0 : L) = 1.0;
  for (int t = 0; t < tau; ++t) z = S * z;
  int radius = 0;
  for (int k = 0; k < L; ++k) {
    if (std::abs(z(k)) > support_threshold || std::abs(z(L + k)) > support_threshold)
      radius = std::max(radius, std::min(k, L - k));
  }
  return radius;
}

}  // namespace cqft
