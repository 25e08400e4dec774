#pragma once

// Truncated field-grid simulator for periodic d = 1 chains.
//
// Each site carries a uniform grid of n field values; its conjugate momentum
// is defined through the unitary DFT on that grid. Circuit steps are stored as
// ordered layers (diagonal phases and per-site n x n kernels) and applied to
// state vectors, so amplitudes never need the full dense operator.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "cqft/errors.hpp"
#include "cqft/kinematics.hpp"
#include "cqft/quadrature.hpp"

namespace cqft {

using cplx = std::complex<double>;

struct FieldGrid {
  int n_points = 0;
  double delta_phi = 0.0;

  FieldGrid() = default;
  FieldGrid(int n, double dphi) : n_points(n), delta_phi(dphi) {
    detail::require(n >= 8 && n % 2 == 0, "field grid needs an even number of points >= 8");
    detail::require(std::isfinite(dphi) && dphi > 0.0, "field grid spacing must be positive");
  }

  /// Spacing for which the DFT kernel of exp(-i (dt / 2a) P^2) is an exact
  /// discrete Gaussian: delta_phi^2 = 2 pi (dt / a) / n.
  static FieldGrid gauss_matched(int n, const LatticeParams& params) {
    return FieldGrid(n, std::sqrt(2.0 * pi * params.kappa() / n));
  }
  /// Grid covering [-phi_max, phi_max) with n points.
  static FieldGrid fixed_extent(int n, double phi_max) { return FieldGrid(n, 2.0 * phi_max / n); }
  static double default_extent(const LatticeParams& params) {
    detail::require(params.m() > 0.0, "default field extent needs m > 0");
    return 6.0 / std::sqrt(2.0 * params.m());
  }

  double value(int j) const { return (j - n_points / 2) * delta_phi; }
  double extent() const { return 0.5 * n_points * delta_phi; }
  double conjugate_momentum(int k) const { return 2.0 * pi * (k - n_points / 2) / (n_points * delta_phi); }
};

/// Unitary DFT from field values to conjugate momenta.
inline Eigen::MatrixXcd grid_fourier(const FieldGrid& grid) {
  const int n = grid.n_points;
  Eigen::MatrixXcd F(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      F(k, j) = std::polar(1.0 / std::sqrt(double(n)), -2.0 * pi * double(k - n / 2) * double(j - n / 2) / n);
  return F;
}

/// f(P) = F^dagger diag(f(k)) F on one site.
template <class Fn>
Eigen::MatrixXcd momentum_function(const FieldGrid& grid, Fn&& f) {
  const auto F = grid_fourier(grid);
  Eigen::VectorXcd d(grid.n_points);
  for (int k = 0; k < grid.n_points; ++k) d(k) = f(grid.conjugate_momentum(k));
  return F.adjoint() * d.asDiagonal() * F;
}

struct SiteOperators {
  Eigen::MatrixXcd X;
  Eigen::MatrixXcd P;
};

inline SiteOperators build_site_operators(const FieldGrid& grid) {
  Eigen::VectorXcd x(grid.n_points);
  for (int j = 0; j < grid.n_points; ++j) x(j) = grid.value(j);
  return {x.asDiagonal().toDenseMatrix(), momentum_function(grid, [](double k) { return cplx(k); })};
}

/// Periodic chain of L sites with a field grid per site.
struct TruncatedLattice {
  int L = 0;
  FieldGrid grid;
  LatticeParams params;
  std::uint64_t cap = 1ull << 20;

  TruncatedLattice(int L_, FieldGrid grid_, LatticeParams params_, std::uint64_t cap_ = 1ull << 20)
      : L(L_), grid(grid_), params(params_), cap(cap_) {
    detail::require(params.d() == 1, "state-vector simulation is implemented for d = 1");
    detail::require(L >= 2, "state-vector simulation needs L >= 2");
    std::uint64_t dim = 1;
    for (int s = 0; s < L; ++s) {
      dim *= static_cast<std::uint64_t>(grid.n_points);
      if (dim > cap)
        throw DimensionCap("n_points^L exceeds the Hilbert-space cap of " + std::to_string(cap));
    }
  }

  std::size_t dimension() const {
    std::size_t d = 1;
    for (int s = 0; s < L; ++s) d *= static_cast<std::size_t>(grid.n_points);
    return d;
  }

  /// Configuration index with site 0 least significant.
  std::size_t index(const std::vector<int>& config) const {
    detail::require(config.size() == static_cast<std::size_t>(L), "configuration has the wrong number of sites");
    std::size_t c = 0;
    for (int s = L - 1; s >= 0; --s) {
      detail::require(config[s] >= 0 && config[s] < grid.n_points, "configuration index outside the field grid");
      c = c * grid.n_points + config[s];
    }
    return c;
  }

  std::vector<int> config(std::size_t c) const {
    std::vector<int> out(L);
    for (int s = 0; s < L; ++s) {
      out[s] = static_cast<int>(c % grid.n_points);
      c /= grid.n_points;
    }
    return out;
  }

  /// Field values of a configuration.
  std::vector<double> fields(std::size_t c) const {
    std::vector<double> f(L);
    for (int s = 0; s < L; ++s) {
      f[s] = grid.value(static_cast<int>(c % grid.n_points));
      c /= grid.n_points;
    }
    return f;
  }
};

/// Potential part of the lattice Hamiltonian,
/// H_X = a sum_n [ ((phi_{n+1} - phi_n)/a)^2 / 2 + m^2 phi_n^2 / 2 + lambda phi_n^4 / 24 ].
inline double potential_energy(const LatticeParams& params, const std::vector<double>& phi, double lambda) {
  const double a = params.a(), m2 = params.m() * params.m();
  const int L = static_cast<int>(phi.size());
  double v = 0.0;
  for (int s = 0; s < L; ++s) {
    const double g = (phi[(s + 1) % L] - phi[s]) / a;
    const double p2 = phi[s] * phi[s];
    v += 0.5 * g * g + 0.5 * m2 * p2 + lambda * p2 * p2 / 24.0;
  }
  return a * v;
}

/// Interaction phase V = dt a lambda / 24 sum_n phi_n^4 of one step.
inline double interaction_phase(const LatticeParams& params, const std::vector<double>& phi, double lambda) {
  double q = 0.0;
  for (double x : phi) q += x * x * x * x;
  return params.dt() * params.a() * lambda * q / 24.0;
}

struct Layer {
  enum class Type { Diagonal, Site } type;
  Eigen::VectorXcd diag;  ///< phases per configuration
  Eigen::MatrixXcd site;  ///< kernel applied on every site
};

/// Product of layers; layers[0] acts first.
class StepOperator {
 public:
  StepOperator(const TruncatedLattice& lat, std::string label) : L_(lat.L), n_(lat.grid.n_points), dim_(lat.dimension()), label_(std::move(label)) {}

  const std::string& label() const { return label_; }
  std::size_t dimension() const { return dim_; }
  const std::vector<Layer>& layers() const { return layers_; }

  StepOperator& diagonal(Eigen::VectorXcd d) {
    layers_.push_back({Layer::Type::Diagonal, std::move(d), {}});
    return *this;
  }
  StepOperator& site(Eigen::MatrixXcd k) {
    layers_.push_back({Layer::Type::Site, {}, std::move(k)});
    return *this;
  }
  /// Appends all layers of `other` (acting after the current ones).
  StepOperator& then(const StepOperator& other) {
    layers_.insert(layers_.end(), other.layers_.begin(), other.layers_.end());
    return *this;
  }

  StepOperator adjoint() const {
    StepOperator r = *this;
    r.layers_.clear();
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
      if (it->type == Layer::Type::Diagonal)
        r.diagonal(it->diag.conjugate());
      else
        r.site(it->site.adjoint());
    }
    r.label_ = label_ + "^dagger";
    return r;
  }

  StepOperator power(int tau) const {
    detail::require(tau >= 0, "power must be non-negative");
    StepOperator r = *this;
    r.layers_.clear();
    for (int t = 0; t < tau; ++t) r.then(*this);
    r.label_ = label_ + "^" + std::to_string(tau);
    return r;
  }

  void apply_inplace(Eigen::VectorXcd& psi) const {
    for (const auto& layer : layers_) {
      if (layer.type == Layer::Type::Diagonal) {
        psi.array() *= layer.diag.array();
        continue;
      }
      const Eigen::MatrixXcd Kt = layer.site.transpose();
      std::size_t stride = 1;
      for (int s = 0; s < L_; ++s) {
        const std::size_t block = stride * n_;
        for (std::size_t off = 0; off < dim_; off += block) {
          Eigen::Map<Eigen::MatrixXcd> B(psi.data() + off, stride, n_);
          B = (B * Kt).eval();
        }
        stride *= n_;
      }
    }
  }

  Eigen::VectorXcd apply(Eigen::VectorXcd psi) const {
    apply_inplace(psi);
    return psi;
  }

  /// Dense matrix; refuses dimensions above `dense_cap`.
  Eigen::MatrixXcd dense(std::size_t dense_cap = 2048) const {
    if (dim_ > dense_cap)
      throw DimensionCap("dense operator of dimension " + std::to_string(dim_) + " exceeds the cap " + std::to_string(dense_cap));
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(dim_, dim_);
    for (std::size_t c = 0; c < dim_; ++c) {
      Eigen::VectorXcd col = U.col(c);
      apply_inplace(col);
      U.col(c) = col;
    }
    return U;
  }

  /// <f|U|i>. Cheap when the operator has at most one site layer.
  cplx matrix_element(std::size_t f, std::size_t i) const {
    int site_layers = 0;
    for (const auto& l : layers_) site_layers += l.type == Layer::Type::Site;
    if (site_layers > 1) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim_);
      e(i) = 1.0;
      apply_inplace(e);
      return e(f);
    }
    cplx before = 1.0, after = 1.0;
    const Eigen::MatrixXcd* K = nullptr;
    for (const auto& l : layers_) {
      if (l.type == Layer::Type::Site)
        K = &l.site;
      else if (K == nullptr)
        before *= l.diag(i);
      else
        after *= l.diag(f);
    }
    if (K == nullptr) return f == i ? before : cplx(0.0);
    cplx k = 1.0;
    std::size_t ff = f, ii = i;
    for (int s = 0; s < L_; ++s) {
      k *= (*K)(ff % n_, ii % n_);
      ff /= n_;
      ii /= n_;
    }
    return after * k * before;
  }

 private:
  int L_;
  std::size_t n_;
  std::size_t dim_;
  std::string label_;
  std::vector<Layer> layers_;
};

enum class StepKind { Strang, Trotter, Shift };

inline const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::Strang: return "strang";
    case StepKind::Trotter: return "trotter";
    case StepKind::Shift: return "shift";
  }
  return "?";
}

/// exp(-i t H_X) as a diagonal over configurations.
inline Eigen::VectorXcd potential_phases(const TruncatedLattice& lat, double lambda, double t) {
  Eigen::VectorXcd d(lat.dimension());
  for (std::size_t c = 0; c < lat.dimension(); ++c)
    d(c) = std::polar(1.0, -t * potential_energy(lat.params, lat.fields(c), lambda));
  return d;
}

/// exp(-i t H_P) on one site, H_P = P^2 / (2a).
inline Eigen::MatrixXcd kinetic_kernel(const TruncatedLattice& lat, double t) {
  const double a = lat.params.a();
  return momentum_function(lat.grid, [&](double k) { return std::polar(1.0, -t * k * k / (2.0 * a)); });
}

/// exp(-i s V) for the interaction phase V of one step.
inline Eigen::VectorXcd interaction_phases(const TruncatedLattice& lat, double lambda, double s) {
  Eigen::VectorXcd d(lat.dimension());
  for (std::size_t c = 0; c < lat.dimension(); ++c)
    d(c) = std::polar(1.0, -s * interaction_phase(lat.params, lat.fields(c), lambda));
  return d;
}

/// Shift-circuit layers.
inline Eigen::VectorXcd shift_wx_phases(const TruncatedLattice& lat, double lambda) {
  const double M = lat.params.M();
  Eigen::VectorXcd d(lat.dimension());
  for (std::size_t c = 0; c < lat.dimension(); ++c) {
    const auto phi = lat.fields(c);
    double hop = 0.0;
    for (int s = 0; s < lat.L; ++s) hop += phi[s] * phi[(s + 1) % lat.L];
    d(c) = std::polar(1.0, 0.5 * M * hop - 0.5 * interaction_phase(lat.params, phi, lambda));
  }
  return d;
}

/// exp(-i (pi / 4)(X^2 + P^2)) on one site, by Hermitian eigendecomposition.
inline Eigen::MatrixXcd shift_wp_kernel(const FieldGrid& grid) {
  const auto ops = build_site_operators(grid);
  Eigen::MatrixXcd H = ops.X * ops.X + ops.P * ops.P;
  H = 0.5 * (H + H.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  Eigen::VectorXcd ph(grid.n_points);
  for (int k = 0; k < grid.n_points; ++k) ph(k) = std::polar(1.0, -0.25 * pi * es.eigenvalues()(k));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

inline StepOperator build_step(const TruncatedLattice& lat, StepKind kind, double lambda) {
  const double h = lat.params.dt();
  StepOperator U(lat, to_string(kind));
  switch (kind) {
    case StepKind::Strang: {
      const auto half = potential_phases(lat, lambda, 0.5 * h);
      U.diagonal(half).site(kinetic_kernel(lat, h)).diagonal(half);
      break;
    }
    case StepKind::Trotter:
      U.diagonal(potential_phases(lat, lambda, h)).site(kinetic_kernel(lat, h));
      break;
    case StepKind::Shift: {
      const auto wx = shift_wx_phases(lat, lambda);
      U.diagonal(wx).site(shift_wp_kernel(lat.grid)).diagonal(wx);
      break;
    }
  }
  return U;
}

namespace detail {

inline void require_tau(int tau) { require(tau >= 0, "tau must be non-negative"); }

inline void check_path_cap(const TruncatedLattice& lat, int tau, double cap) {
  const double terms = std::pow(double(lat.grid.n_points), double(lat.L) * std::max(0, tau - 1));
  if (terms > cap)
    throw BruteForceCap("path sum needs " + std::to_string(terms) + " terms, cap is " + std::to_string(cap));
}

/// Odometer over (tau - 1) intermediate configurations.
class PathOdometer {
 public:
  PathOdometer(std::size_t dim, int slots) : dim_(dim), idx_(std::max(0, slots), 0) {}
  const std::vector<std::size_t>& current() const { return idx_; }
  bool next() {
    for (auto& x : idx_) {
      if (++x < dim_) return true;
      x = 0;
    }
    return false;
  }

 private:
  std::size_t dim_;
  std::vector<std::size_t> idx_;
};

}  // namespace detail

/// <phi_f| U^tau |phi_i> by repeated state-vector application.
inline cplx amplitude_circuit(const TruncatedLattice& lat, StepKind kind, double lambda,
                              const std::vector<int>& phi_i, const std::vector<int>& phi_f, int tau) {
  detail::require_tau(tau);
  const std::size_t i = lat.index(phi_i), f = lat.index(phi_f);
  const auto U = build_step(lat, kind, lambda);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(lat.dimension());
  psi(i) = 1.0;
  for (int t = 0; t < tau; ++t) U.apply_inplace(psi);
  return psi(f);
}

/// Explicit sum over all intermediate configurations of products of one-step
/// matrix elements.
inline cplx amplitude_path_sum(const TruncatedLattice& lat, StepKind kind, double lambda,
                               const std::vector<int>& phi_i, const std::vector<int>& phi_f, int tau,
                               double cap = 1e8) {
  detail::require_tau(tau);
  detail::check_path_cap(lat, tau, cap);
  const std::size_t i = lat.index(phi_i), f = lat.index(phi_f);
  if (tau == 0) return i == f ? 1.0 : 0.0;
  const auto U = build_step(lat, kind, lambda);
  if (tau == 1) return U.matrix_element(f, i);
  detail::PathOdometer path(lat.dimension(), tau - 1);
  KahanSum<cplx> sum;
  do {
    const auto& mid = path.current();
    cplx term = U.matrix_element(mid[0], i);
    for (int v = 1; v + 1 < tau; ++v) term *= U.matrix_element(mid[v], mid[v - 1]);
    term *= U.matrix_element(f, mid.back());
    sum.add(term);
  } while (path.next());
  return sum.value();
}

/// Discrete action of one Strang step between configurations x and y.
inline double strang_step_action(const TruncatedLattice& lat, double lambda, const std::vector<double>& x,
                                 const std::vector<double>& y) {
  const double a = lat.params.a(), h = lat.params.dt();
  double kin = 0.0;
  for (int s = 0; s < lat.L; ++s) kin += (y[s] - x[s]) * (y[s] - x[s]);
  kin *= a / (2.0 * h);
  return kin - 0.5 * h * (potential_energy(lat.params, x, lambda) + potential_energy(lat.params, y, lambda));
}

/// Riemann sum of exp(iS) over intermediate grid configurations with the
/// measure (sqrt(a / (2 pi i dt)) delta_phi)^(tau L).
inline cplx amplitude_action_form(const TruncatedLattice& lat, double lambda, const std::vector<int>& phi_i,
                                  const std::vector<int>& phi_f, int tau, double cap = 1e8) {
  detail::require(tau >= 1, "action form needs tau >= 1");
  detail::check_path_cap(lat, tau, cap);
  const double a = lat.params.a(), h = lat.params.dt();
  const cplx unit = std::sqrt(a / (2.0 * pi * h)) * std::polar(1.0, -0.25 * pi) * lat.grid.delta_phi;
  const cplx measure = std::pow(unit, tau * lat.L);
  const auto xi = lat.fields(lat.index(phi_i));
  const auto xf = lat.fields(lat.index(phi_f));
  if (tau == 1) return measure * std::polar(1.0, strang_step_action(lat, lambda, xi, xf));

  // Per-configuration data reused across the sum.
  const std::size_t dim = lat.dimension();
  std::vector<std::vector<double>> fields(dim);
  for (std::size_t c = 0; c < dim; ++c) fields[c] = lat.fields(c);
  detail::PathOdometer path(dim, tau - 1);
  KahanSum<cplx> sum;
  do {
    const auto& mid = path.current();
    double S = strang_step_action(lat, lambda, xi, fields[mid[0]]);
    for (int v = 1; v + 1 < tau; ++v) S += strang_step_action(lat, lambda, fields[mid[v - 1]], fields[mid[v]]);
    S += strang_step_action(lat, lambda, fields[mid.back()], xf);
    sum.add(std::polar(1.0, S));
  } while (path.next());
  return measure * sum.value();
}

/// Max relative deviation of the DFT kernel of exp(-i P^2 / 2) from
/// sqrt(1 / (2 pi i)) exp(i (y - z)^2 / 2) delta_phi over |y|, |z| <= radius * extent.
inline double kernel_gaussian_check(const FieldGrid& grid, double radius = 0.5) {
  const auto K = momentum_function(grid, [](double k) { return std::polar(1.0, -0.5 * k * k); });
  const cplx pref = std::polar(grid.delta_phi / std::sqrt(2.0 * pi), -0.25 * pi);
  double worst = 0.0;
  const double lim = radius * grid.extent();
  for (int y = 0; y < grid.n_points; ++y) {
    if (std::abs(grid.value(y)) > lim) continue;
    for (int z = 0; z < grid.n_points; ++z) {
      if (std::abs(grid.value(z)) > lim) continue;
      const double d = grid.value(y) - grid.value(z);
      const cplx target = pref * std::polar(1.0, 0.5 * d * d);
      worst = std::max(worst, std::abs(K(y, z) - target) / std::abs(target));
    }
  }
  return worst;
}

/// Free step and interaction phase such that U = U_int^{1/2} U_0 U_int^{1/2}
/// (Strang, Shift) or U = U_0 U_int (Trotter), with U_int = exp(-iV).
struct InteractionSplit {
  StepOperator U;
  StepOperator U0;
  Eigen::VectorXcd Uint;  ///< exp(-iV)
  Eigen::VectorXcd Uhalf; ///< exp(-iV/2)
};

inline InteractionSplit interaction_split(const TruncatedLattice& lat, StepKind kind, double lambda) {
  return {build_step(lat, kind, lambda), build_step(lat, kind, 0.0), interaction_phases(lat, lambda, 1.0),
          interaction_phases(lat, lambda, 0.5)};
}

inline double operator_norm(const Eigen::MatrixXcd& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues()(0);
}

/// || U_0^{dagger tau} U^tau - product of interaction-picture factors ||.
inline double interaction_picture_check(const TruncatedLattice& lat, StepKind kind, double lambda, int tau,
                                        std::size_t dense_cap = 2048) {
  detail::require(tau >= 1, "interaction-picture check needs tau >= 1");
  const auto split = interaction_split(lat, kind, lambda);
  const Eigen::MatrixXcd U = split.U.dense(dense_cap);
  const Eigen::MatrixXcd U0 = split.U0.dense(dense_cap);
  const std::size_t dim = lat.dimension();

  Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Identity(dim, dim);
  for (int t = 0; t < tau; ++t) lhs = U * lhs;
  for (int t = 0; t < tau; ++t) lhs = U0.adjoint() * lhs;

  // U0^{-nu} D U0^{nu}
  std::vector<Eigen::MatrixXcd> U0pow{Eigen::MatrixXcd::Identity(dim, dim)};
  for (int t = 0; t < tau; ++t) U0pow.push_back(U0 * U0pow.back());
  auto pictured = [&](const Eigen::VectorXcd& d, int nu) -> Eigen::MatrixXcd {
    return U0pow[nu].adjoint() * d.asDiagonal() * U0pow[nu];
  };

  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Identity(dim, dim);
  if (kind == StepKind::Trotter) {
    for (int nu = 0; nu < tau; ++nu) rhs = pictured(split.Uint, nu) * rhs;
  } else {
    rhs = pictured(split.Uhalf, 0);
    for (int nu = 1; nu < tau; ++nu) rhs = pictured(split.Uint, nu) * rhs;
    rhs = pictured(split.Uhalf, tau) * rhs;
  }
  return operator_norm(lhs - rhs);
}

/// Cyclic site translation as a permutation of configuration indices.
inline std::vector<std::size_t> translation_permutation(const TruncatedLattice& lat) {
  std::vector<std::size_t> perm(lat.dimension());
  for (std::size_t c = 0; c < perm.size(); ++c) {
    const auto cfg = lat.config(c);
    std::vector<int> shifted(lat.L);
    for (int s = 0; s < lat.L; ++s) shifted[(s + 1) % lat.L] = cfg[s];
    perm[c] = lat.index(shifted);
  }
  return perm;
}

}  // namespace cqft
