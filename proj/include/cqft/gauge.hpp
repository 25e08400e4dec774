#pragma once

// Z_N lattice gauge theory on a periodic Lx x Ly spatial lattice.
//
// Configurations assign a group element u_l in {0..N-1} to every link. The
// link index is 2 (y Lx + x) + dir with dir 0 = e_x, dir 1 = e_y, and the
// configuration index is sum_l u_l N^l. The transfer operator is
// T = W_el W_mag; W_mag is diagonal, W_el acts link by link.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cqft/errors.hpp"
#include "cqft/kinematics.hpp"
#include "cqft/quadrature.hpp"

namespace cqft {

using cplx = std::complex<double>;

struct GaugeGroupZN {
  int N = 1;

  explicit GaugeGroupZN(int n) : N(n) { detail::require(n >= 1, "Z_N needs N >= 1"); }
  int add(int a, int b) const { return ((a + b) % N + N) % N; }
  int neg(int a) const { return add(0, -a); }
  /// Re tr of the embedding k -> exp(2 pi i k / N).
  double re_trace(int k) const { return std::cos(2.0 * pi * k / N); }
};

struct Plaquette {
  int x = 0, y = 0;
  std::array<int, 4> links{};  ///< (x,ex), (x+ex,ey), (x+ey,ex), (x,ey)
  std::array<int, 4> signs{1, 1, -1, -1};
};

struct GaugeLattice {
  int Lx = 0, Ly = 0;

  GaugeLattice(int lx, int ly) : Lx(lx), Ly(ly) {
    detail::require(lx >= 1 && ly >= 1, "gauge lattice extents must be positive");
  }

  int sites() const { return Lx * Ly; }
  int links() const { return 2 * Lx * Ly; }
  int plaquettes() const { return Lx * Ly; }
  int site(int x, int y) const { return ((y % Ly + Ly) % Ly) * Lx + ((x % Lx + Lx) % Lx); }
  int link(int x, int y, int dir) const { return 2 * site(x, y) + dir; }

  /// Site at which link l starts and the site it points to.
  std::pair<int, int> link_ends(int l) const {
    const int s = l / 2, dir = l % 2;
    const int x = s % Lx, y = s / Lx;
    return {s, dir == 0 ? site(x + 1, y) : site(x, y + 1)};
  }

  Plaquette plaquette(int p) const {
    const int x = p % Lx, y = p / Lx;
    Plaquette pl;
    pl.x = x;
    pl.y = y;
    pl.links = {link(x, y, 0), link(x + 1, y, 1), link(x, y + 1, 0), link(x, y, 1)};
    return pl;
  }
};

using GaugeConfig = std::vector<int>;

struct GaugeOperator {
  Eigen::MatrixXcd matrix;
  std::string label;
};

inline constexpr std::uint64_t gauge_dimension_cap = 1ull << 22;
inline constexpr std::size_t gauge_dense_cap = 4096;

/// N^{#links}; throws DimensionCap above 2^22.
inline std::size_t gauge_dimension(const GaugeLattice& lat, const GaugeGroupZN& G) {
  std::uint64_t d = 1;
  for (int l = 0; l < lat.links(); ++l) {
    d *= static_cast<std::uint64_t>(G.N);
    if (d > gauge_dimension_cap) throw DimensionCap("N^links exceeds the gauge configuration cap 2^22");
  }
  return static_cast<std::size_t>(d);
}

inline std::size_t encode(const GaugeLattice& lat, const GaugeGroupZN& G, const GaugeConfig& u) {
  detail::require(u.size() == static_cast<std::size_t>(lat.links()), "gauge configuration has the wrong number of links");
  std::size_t c = 0;
  for (int l = lat.links() - 1; l >= 0; --l) {
    detail::require(u[l] >= 0 && u[l] < G.N, "link value outside Z_N");
    c = c * G.N + u[l];
  }
  return c;
}

inline GaugeConfig decode(const GaugeLattice& lat, const GaugeGroupZN& G, std::size_t c) {
  GaugeConfig u(lat.links());
  for (auto& x : u) {
    x = static_cast<int>(c % G.N);
    c /= G.N;
  }
  return u;
}

inline int holonomy(const GaugeGroupZN& G, const Plaquette& p, const GaugeConfig& u) {
  int h = 0;
  for (int k = 0; k < 4; ++k) h += p.signs[k] * u[p.links[k]];
  return G.add(h, 0);
}

/// Per-configuration phases of exp(-i (2 kappa / g^2) sum over `plaqs` of Re tr U_p).
inline Eigen::VectorXcd wmag_phases(const GaugeLattice& lat, const GaugeGroupZN& G, double g, double kappa,
                                    const std::vector<int>& plaqs) {
  detail::require(g > 0.0 && kappa > 0.0, "g and kappa must be positive");
  const std::size_t dim = gauge_dimension(lat, G);
  std::vector<Plaquette> ps;
  for (int p : plaqs) ps.push_back(lat.plaquette(p));
  Eigen::VectorXcd d(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    const auto u = decode(lat, G, c);
    double s = 0.0;
    for (const auto& p : ps) s += G.re_trace(holonomy(G, p, u));
    d(c) = std::polar(1.0, -2.0 * kappa / (g * g) * s);
  }
  return d;
}

inline std::vector<int> all_plaquettes(const GaugeLattice& lat) {
  std::vector<int> p(lat.plaquettes());
  for (int i = 0; i < lat.plaquettes(); ++i) p[i] = i;
  return p;
}

inline GaugeOperator build_wmag(const GaugeLattice& lat, const GaugeGroupZN& G, double g, double kappa = 1.0) {
  const auto d = wmag_phases(lat, G, g, kappa, all_plaquettes(lat));
  if (static_cast<std::size_t>(d.size()) > gauge_dense_cap) throw DimensionCap("W_mag too large to materialize");
  return {d.asDiagonal().toDenseMatrix(), "W_mag"};
}

/// Chessboard partition of plaquettes by (x + y) mod 2.
inline std::array<std::vector<int>, 2> plaquette_coloring(const GaugeLattice& lat) {
  if (lat.Lx % 2 != 0 || lat.Ly % 2 != 0) throw OddLattice("chessboard coloring needs even Lx and Ly");
  std::array<std::vector<int>, 2> layers;
  for (int p = 0; p < lat.plaquettes(); ++p) {
    const auto pl = lat.plaquette(p);
    layers[(pl.x + pl.y) % 2].push_back(p);
  }
  return layers;
}

inline double electric_beta(double g, double kappa) {
  detail::require(g > 0.0 && kappa > 0.0, "g and kappa must be positive");
  return 2.0 / (kappa * g * g);
}

/// <u'| W_el |u> = (1/N) exp(-i beta Re tr(u - u')) on one link.
inline Eigen::MatrixXcd wel_link_matrix(const GaugeGroupZN& G, double g, double kappa) {
  const double beta = electric_beta(g, kappa);
  Eigen::MatrixXcd K(G.N, G.N);
  for (int up = 0; up < G.N; ++up)
    for (int u = 0; u < G.N; ++u) K(up, u) = std::polar(1.0 / G.N, -beta * G.re_trace(G.add(u, -up)));
  return K;
}

/// Character-basis eigenvalues (1/N) sum_v exp(-i beta cos(2 pi v/N)) exp(-2 pi i n v/N).
inline Eigen::VectorXcd wel_eigenvalues(const GaugeGroupZN& G, double g, double kappa) {
  const double beta = electric_beta(g, kappa);
  Eigen::VectorXcd ev(G.N);
  for (int n = 0; n < G.N; ++n) {
    KahanSum<cplx> s;
    for (int v = 0; v < G.N; ++v) s.add(std::polar(1.0, -beta * G.re_trace(v) - 2.0 * pi * n * v / G.N));
    ev(n) = s.value() / double(G.N);
  }
  return ev;
}

/// ||W_el^dagger W_el - 1|| for one link, from the eigenvalue moduli.
inline double unitarity_report(const GaugeGroupZN& G, double g, double kappa) {
  const auto ev = wel_eigenvalues(G, g, kappa);
  double dev = 0.0;
  for (int n = 0; n < G.N; ++n) dev = std::max(dev, std::abs(std::norm(ev(n)) - 1.0));
  return dev;
}

namespace detail {

/// Applies the n x n matrix K to every tensor factor of psi.
inline void apply_each_factor(Eigen::VectorXcd& psi, const Eigen::MatrixXcd& K, int factors) {
  const Eigen::Index n = K.rows();
  const Eigen::MatrixXcd Kt = K.transpose();
  Eigen::Index stride = 1;
  for (int s = 0; s < factors; ++s) {
    const Eigen::Index block = stride * n;
    for (Eigen::Index off = 0; off < psi.size(); off += block) {
      Eigen::Map<Eigen::MatrixXcd> B(psi.data() + off, stride, n);
      B = (B * Kt).eval();
    }
    stride *= n;
  }
}

template <class Apply>
Eigen::MatrixXcd materialize(std::size_t dim, Apply&& apply) {
  if (dim > gauge_dense_cap) throw DimensionCap("gauge operator too large to materialize");
  Eigen::MatrixXcd M(dim, dim);
  for (std::size_t c = 0; c < dim; ++c) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
    e(c) = 1.0;
    apply(e);
    M.col(c) = e;
  }
  return M;
}

}  // namespace detail

inline GaugeOperator build_wel(const GaugeLattice& lat, const GaugeGroupZN& G, double g, double kappa = 1.0) {
  const auto K = wel_link_matrix(G, g, kappa);
  return {detail::materialize(gauge_dimension(lat, G),
                              [&](Eigen::VectorXcd& v) { detail::apply_each_factor(v, K, lat.links()); }),
          "W_el"};
}

/// u_{x,e} -> omega_x + u_{x,e} - omega_{x+e}.
inline GaugeConfig gauge_transform_config(const GaugeLattice& lat, const GaugeGroupZN& G, const std::vector<int>& omega,
                                          const GaugeConfig& u) {
  detail::require(omega.size() == static_cast<std::size_t>(lat.sites()), "gauge transform needs one element per site");
  GaugeConfig out(u.size());
  for (int l = 0; l < lat.links(); ++l) {
    const auto [from, to] = lat.link_ends(l);
    out[l] = G.add(G.add(omega[from], u[l]), -omega[to]);
  }
  return out;
}

/// Permutation c -> index of D(Omega)|c>.
inline std::vector<std::size_t> gauge_permutation(const GaugeLattice& lat, const GaugeGroupZN& G,
                                                  const std::vector<int>& omega) {
  const std::size_t dim = gauge_dimension(lat, G);
  std::vector<std::size_t> perm(dim);
  for (std::size_t c = 0; c < dim; ++c) perm[c] = encode(lat, G, gauge_transform_config(lat, G, omega, decode(lat, G, c)));
  return perm;
}

inline GaugeOperator gauge_transform(const GaugeLattice& lat, const GaugeGroupZN& G, const std::vector<int>& omega) {
  const auto perm = gauge_permutation(lat, G, omega);
  if (perm.size() > gauge_dense_cap) throw DimensionCap("D(Omega) too large to materialize");
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(perm.size(), perm.size());
  for (std::size_t c = 0; c < perm.size(); ++c) D(perm[c], c) = 1.0;
  return {D, "D(Omega)"};
}

/// All N^{#sites} gauge transformations, site 0 least significant.
inline std::vector<std::vector<int>> all_gauge_transforms(const GaugeLattice& lat, const GaugeGroupZN& G) {
  std::size_t count = 1;
  for (int s = 0; s < lat.sites(); ++s) count *= G.N;
  std::vector<std::vector<int>> out(count, std::vector<int>(lat.sites()));
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t r = k;
    for (auto& w : out[k]) {
      w = static_cast<int>(r % G.N);
      r /= G.N;
    }
  }
  return out;
}

/// Transfer operator T = W_el W_mag as an in-place map on state vectors.
class TransferOperator {
 public:
  TransferOperator(const GaugeLattice& lat, const GaugeGroupZN& G, double g, double kappa = 1.0)
      : links_(lat.links()),
        mag_(wmag_phases(lat, G, g, kappa, all_plaquettes(lat))),
        el_(wel_link_matrix(G, g, kappa)) {}

  void apply(Eigen::VectorXcd& psi) const {
    psi.array() *= mag_.array();
    detail::apply_each_factor(psi, el_, links_);
  }
  std::size_t dimension() const { return static_cast<std::size_t>(mag_.size()); }
  Eigen::MatrixXcd dense() const {
    return detail::materialize(dimension(), [&](Eigen::VectorXcd& v) { apply(v); });
  }

 private:
  int links_;
  Eigen::VectorXcd mag_;
  Eigen::MatrixXcd el_;
};

/// Group average of the permutations D(Omega) applied to psi.
inline Eigen::VectorXcd apply_gauss_projector(const GaugeLattice& lat, const GaugeGroupZN& G, const Eigen::VectorXcd& psi) {
  const auto omegas = all_gauge_transforms(lat, G);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (const auto& w : omegas) {
    const auto perm = gauge_permutation(lat, G, w);
    for (std::size_t c = 0; c < perm.size(); ++c) out(perm[c]) += psi(c);
  }
  return out / double(omegas.size());
}

inline GaugeOperator gauss_projector(const GaugeLattice& lat, const GaugeGroupZN& G) {
  return {detail::materialize(gauge_dimension(lat, G),
                              [&](Eigen::VectorXcd& v) { v = apply_gauss_projector(lat, G, v); }),
          "P_G"};
}

/// Largest ||(T D - D T) psi|| / ||psi|| over all Omega and a few fixed
/// pseudo-random probe vectors.
inline double gauss_commutator_max(const GaugeLattice& lat, const GaugeGroupZN& G, double g, double kappa,
                                   int probes = 3) {
  const TransferOperator T(lat, G, g, kappa);
  const std::size_t dim = T.dimension();
  std::mt19937_64 eng(7u);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int k = 0; k < probes; ++k) {
    Eigen::VectorXcd psi(dim);
    for (auto& z : psi) z = cplx(nd(eng), nd(eng));
    psi.normalize();
    for (const auto& w : all_gauge_transforms(lat, G)) {
      const auto perm = gauge_permutation(lat, G, w);
      Eigen::VectorXcd Dpsi(dim);
      for (std::size_t c = 0; c < dim; ++c) Dpsi(perm[c]) = psi(c);
      Eigen::VectorXcd TD = Dpsi;
      T.apply(TD);
      Eigen::VectorXcd Tpsi = psi;
      T.apply(Tpsi);
      Eigen::VectorXcd DT(dim);
      for (std::size_t c = 0; c < dim; ++c) DT(perm[c]) = Tpsi(c);
      worst = std::max(worst, (TD - DT).norm());
    }
  }
  return worst;
}

struct GaugeEquivalence {
  cplx lhs;           ///< N^{#links} <U_f| T^tau P_G |U_i>
  cplx rhs;           ///< N^{-#vars} sum exp(-i S)
  double deviation;   ///< |lhs - rhs|
  double terms;       ///< configurations summed on the right
};

/// Wilson action with anisotropy kappa over tau slices; `space[t]` are the
/// spatial links at time t = 0..tau, `time[t][x]` the temporal link leaving x
/// at time t = 0..tau-1. Spatial plaquettes at t = tau are excluded.
inline double wilson_action(const GaugeLattice& lat, const GaugeGroupZN& G, double g, double kappa,
                            const std::vector<GaugeConfig>& space, const std::vector<std::vector<int>>& time) {
  const int tau = static_cast<int>(time.size());
  double ps = 0.0, pt = 0.0;
  for (int t = 0; t < tau; ++t) {
    for (int p = 0; p < lat.plaquettes(); ++p) ps += G.re_trace(holonomy(G, lat.plaquette(p), space[t]));
    for (int l = 0; l < lat.links(); ++l) {
      const auto [from, to] = lat.link_ends(l);
      pt += G.re_trace(space[t][l] + time[t][to] - space[t + 1][l] - time[t][from]);
    }
  }
  return 2.0 / (g * g) * (kappa * ps + pt / kappa);
}

inline GaugeEquivalence amplitude_equiv_check(const GaugeLattice& lat, const GaugeGroupZN& G, double g, double kappa,
                                              const GaugeConfig& U_i, const GaugeConfig& U_f, int tau,
                                              double cap = 1e8) {
  detail::require(tau >= 1, "equivalence check needs tau >= 1");
  const std::size_t ci = encode(lat, G, U_i), cf = encode(lat, G, U_f);
  const int nvars = lat.links() * (tau - 1) + lat.sites() * tau;
  const double terms = std::pow(double(G.N), nvars);
  if (terms > cap)
    throw BruteForceCap("gauge path sum needs " + std::to_string(terms) + " terms, cap is " + std::to_string(cap));

  // Left side by state-vector application.
  const TransferOperator T(lat, G, g, kappa);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(T.dimension());
  psi(ci) = 1.0;
  psi = apply_gauss_projector(lat, G, psi);
  for (int t = 0; t < tau; ++t) T.apply(psi);
  const cplx lhs = std::pow(double(G.N), lat.links()) * psi(cf);

  // Right side by explicit enumeration.
  std::vector<GaugeConfig> space(tau + 1, GaugeConfig(lat.links(), 0));
  space.front() = U_i;
  space.back() = U_f;
  std::vector<std::vector<int>> time(tau, std::vector<int>(lat.sites(), 0));
  std::vector<int*> vars;
  for (int t = 1; t < tau; ++t)
    for (auto& x : space[t]) vars.push_back(&x);
  for (auto& slice : time)
    for (auto& x : slice) vars.push_back(&x);

  KahanSum<cplx> sum;
  while (true) {
    sum.add(std::polar(1.0, -wilson_action(lat, G, g, kappa, space, time)));
    std::size_t k = 0;
    for (; k < vars.size(); ++k) {
      if (++*vars[k] < G.N) break;
      *vars[k] = 0;
    }
    if (k == vars.size()) break;
  }
  const cplx rhs = sum.value() / terms;
  return {lhs, rhs, std::abs(lhs - rhs), terms};
}

}  // namespace cqft
