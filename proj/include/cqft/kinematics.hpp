#pragma once

// Closed-form free-circuit kinematics: lattice parameters, Brillouin-zone
// momenta, the cosine symbol c(p), the circuit dispersion theta(p), the
// equal-time energy omega(p), reference energies and the smearing form factor.

#include <cmath>
#include <complex>
#include <initializer_list>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "cqft/errors.hpp"

namespace cqft {

inline constexpr double pi = std::numbers::pi;

/// Plain-data description of a lattice, suitable for designated initializers.
/// `dt == 0` selects dt = a (kappa = 1).
struct LatticeConfig {
  double a = 0.1;
  double dt = 0.0;
  int d = 1;
  double m = 1.0;
  double lambda = 0.0;
  double g = 1.0;
};

/// Validated spacetime discretization and couplings. M = 1 - m^2 a^2 / 2 is
/// always recomputed from m and a.
class LatticeParams {
 public:
  LatticeParams() : LatticeParams(LatticeConfig{}) {}

  explicit LatticeParams(const LatticeConfig& cfg)
      : a_(cfg.a), dt_(cfg.dt == 0.0 ? cfg.a : cfg.dt), d_(cfg.d), m_(cfg.m),
        lambda_(cfg.lambda), g_(cfg.g) {
    detail::require(std::isfinite(a_) && a_ > 0.0, "lattice spacing a must be positive");
    detail::require(std::isfinite(dt_) && dt_ > 0.0, "timestep dt must be positive");
    detail::require(d_ >= 1, "spatial dimension d must be >= 1");
    detail::require(std::isfinite(m_) && m_ >= 0.0, "mass m must be non-negative");
    detail::require(std::isfinite(lambda_) && lambda_ >= 0.0, "coupling lambda must be non-negative");
    detail::require(std::isfinite(g_) && g_ > 0.0, "gauge coupling g must be positive");
  }

  double a() const noexcept { return a_; }
  double dt() const noexcept { return dt_; }
  int d() const noexcept { return d_; }
  int D() const noexcept { return d_ + 1; }
  double m() const noexcept { return m_; }
  double lambda() const noexcept { return lambda_; }
  double g() const noexcept { return g_; }
  double kappa() const noexcept { return dt_ / a_; }

  double M() const noexcept { return 1.0 - one_minus_M(); }
  /// 1 - M, exact (no cancellation).
  double one_minus_M() const noexcept { return 0.5 * m_ * m_ * a_ * a_; }

  LatticeConfig config() const { return {a_, dt_, d_, m_, lambda_, g_}; }

  LatticeParams with_mass(double m) const {
    auto c = config();
    c.m = m;
    return LatticeParams(c);
  }
  LatticeParams with_coupling(double lambda) const {
    auto c = config();
    c.lambda = lambda;
    return LatticeParams(c);
  }
  /// Rescales a keeping kappa = dt / a fixed.
  LatticeParams with_spacing(double a) const {
    auto c = config();
    c.dt = kappa() * a;
    c.a = a;
    return LatticeParams(c);
  }

 private:
  double a_;
  double dt_;
  int d_;
  double m_;
  double lambda_;
  double g_;
};

/// Spatial momentum; components in units of 1/length.
class Momentum {
 public:
  Momentum() = default;
  explicit Momentum(std::vector<double> components) : p_(std::move(components)) {}
  Momentum(std::initializer_list<double> components) : p_(components) {}

  std::span<const double> components() const noexcept { return p_; }
  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }

  Momentum operator-() const {
    Momentum r = *this;
    for (auto& x : r.p_) x = -x;
    return r;
  }

  double norm2() const noexcept {
    double s = 0.0;
    for (double x : p_) s += x * x;
    return s;
  }

 private:
  std::vector<double> p_;
};

/// Maps x into the half-open interval (-half_period, half_period].
inline double wrap_periodic(double x, double half_period) {
  const double period = 2.0 * half_period;
  double r = std::remainder(x, period);
  if (r <= -half_period) r += period;
  return r;
}

inline Momentum wrap_to_zone(const Momentum& p, double a) {
  std::vector<double> q(p.components().begin(), p.components().end());
  for (auto& x : q) x = wrap_periodic(x, pi / a);
  return Momentum(std::move(q));
}

inline bool in_zone(const Momentum& p, double a) {
  constexpr double slack = 1e-12;
  for (double x : p.components()) {
    const double t = x * a;
    if (!(t > -pi && t <= pi * (1.0 + slack))) return false;
  }
  return true;
}

namespace detail {

inline void check_dimension(const LatticeParams& params, const Momentum& p) {
  if (p.size() != static_cast<std::size_t>(params.d()))
    throw DomainError("momentum has " + std::to_string(p.size()) + " components, lattice has d=" +
                      std::to_string(params.d()));
}

inline void check_momentum(const LatticeParams& params, const Momentum& p) {
  check_dimension(params, p);
  if (!in_zone(p, params.a()))
    throw DomainError("momentum component outside the Brillouin zone (-pi/a, pi/a]");
}

}  // namespace detail

/// The L^d momenta p_k = 2 pi k / (L a) of a periodic lattice, folded into
/// the zone.
struct MomentumGrid {
  int L = 0;
  int d = 0;
  double a = 0.0;
  std::vector<Momentum> points;
};

inline MomentumGrid momentum_grid(const LatticeParams& params, int L) {
  detail::require(L >= 1, "momentum grid needs L >= 1");
  MomentumGrid grid{L, params.d(), params.a(), {}};
  std::size_t count = 1;
  for (int i = 0; i < params.d(); ++i) count *= static_cast<std::size_t>(L);
  grid.points.reserve(count);
  std::vector<int> k(params.d(), 0);
  for (std::size_t n = 0; n < count; ++n) {
    std::vector<double> comps(params.d());
    for (int i = 0; i < params.d(); ++i)
      comps[i] = wrap_periodic(2.0 * pi * k[i] / (L * params.a()), pi / params.a());
    grid.points.emplace_back(std::move(comps));
    for (int i = 0; i < params.d(); ++i) {
      if (++k[i] < L) break;
      k[i] = 0;
    }
  }
  return grid;
}

/// c(p) = M prod_i cos(p_i a).
inline double cosine_symbol(const LatticeParams& params, const Momentum& p) {
  detail::check_momentum(params, p);
  double c = params.M();
  for (double x : p.components()) c *= std::cos(x * params.a());
  return c;
}

namespace detail {

/// sqrt(1 - c^2) evaluated as sqrt((1-c)(1+c)); throws when |c| >= 1.
inline double checked_sine(double c) {
  if (!(std::abs(c) < 1.0))
    throw DegenerateDispersion("|c(p)| = " + std::to_string(std::abs(c)) +
                               " >= 1; theta(p) is not real (requires m > 0)");
  return std::sqrt((1.0 - c) * (1.0 + c));
}

}  // namespace detail

/// Circuit quasi-energy theta(p) = arccos(c(p)) / dt, principal branch.
inline double dispersion_theta(const LatticeParams& params, const Momentum& p) {
  const double c = cosine_symbol(params, p);
  const double s = detail::checked_sine(c);
  return std::atan2(s, c) / params.dt();
}

/// omega(p) = sin(theta dt) / dt = sqrt(1 - c^2) / dt.
inline double omega(const LatticeParams& params, const Momentum& p) {
  const double c = cosine_symbol(params, p);
  return detail::checked_sine(c) / params.dt();
}

struct ReferenceEnergies {
  double E;       ///< continuum sqrt(p^2 + m^2)
  double E_latt;  ///< Hamiltonian lattice sqrt(m^2 + sum 4 sin^2(p a / 2) / a^2)
};

inline ReferenceEnergies reference_energies(const LatticeParams& params, const Momentum& p) {
  detail::check_dimension(params, p);
  const double a = params.a();
  double lap = 0.0;
  for (double x : p.components()) {
    const double s = std::sin(0.5 * x * a);
    lap += 4.0 * s * s / (a * a);
  }
  const double m2 = params.m() * params.m();
  return {std::sqrt(p.norm2() + m2), std::sqrt(m2 + lap)};
}

/// Lattice Laplacian symbol plus mass, the curvature of the quadratic H_X.
inline double laplacian_symbol(const LatticeParams& params, const Momentum& p) {
  const auto e = reference_energies(params, p);
  return e.E_latt * e.E_latt;
}

/// One-dimensional smearing weight v(e): v(0) = 1/2, v(+-1) = 1/4.
inline double smear_weight_1d(int e) {
  switch (e) {
    case 0: return 0.5;
    case -1:
    case 1: return 0.25;
    default: throw DomainError("smearing offsets must lie in {-1, 0, 1}");
  }
}

/// w(e) = prod_i v(e_i) for an offset vector with components in {-1, 0, 1}.
inline double smear_weight(std::span<const int> offset) {
  double w = 1.0;
  for (int e : offset) w *= smear_weight_1d(e);
  return w;
}

/// prod_i (1 + cos(p_i a)) / 2.
inline double smear_form_factor(const LatticeParams& params, const Momentum& p) {
  detail::check_dimension(params, p);
  double f = 1.0;
  for (double x : p.components()) f *= 0.5 * (1.0 + std::cos(x * params.a()));
  return f;
}

/// The defining sum  sum_e w(e) exp(i p.e a)  over all 3^d offsets.
inline std::complex<double> smear_form_factor_by_sum(const LatticeParams& params, const Momentum& p) {
  detail::check_dimension(params, p);
  const int d = params.d();
  std::vector<int> e(d, -1);
  std::complex<double> sum = 0.0;
  for (;;) {
    double phase = 0.0;
    for (int i = 0; i < d; ++i) phase += p[i] * e[i] * params.a();
    sum += smear_weight(e) * std::polar(1.0, phase);
    int i = 0;
    for (; i < d; ++i) {
      if (++e[i] <= 1) break;
      e[i] = -1;
    }
    if (i == d) break;
  }
  return sum;
}

}  // namespace cqft
