#pragma once

// Discrete Feynman rules over a closed catalog of diagrams, and the one-loop
// mass correction under three regulators.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqft/elliptic.hpp"
#include "cqft/errors.hpp"
#include "cqft/kinematics.hpp"
#include "cqft/propagator.hpp"
#include "cqft/quadrature.hpp"

namespace cqft {

enum class DiagramKind { Tree2to2, TadpoleMass, BubbleSChannel };

inline DiagramKind diagram_kind_from_string(std::string_view name) {
  if (name == "tree2to2") return DiagramKind::Tree2to2;
  if (name == "tadpole") return DiagramKind::TadpoleMass;
  if (name == "bubble") return DiagramKind::BubbleSChannel;
  throw UnknownDiagram("no diagram named '" + std::string(name) + "'");
}

/// Energy-momentum (p0; p) on the D-dimensional zone.
struct DMomentum {
  double p0 = 0.0;
  Momentum p;
};

inline DMomentum operator+(const DMomentum& x, const DMomentum& y) {
  std::vector<double> s(x.p.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = x.p[i] + y.p[i];
  return {x.p0 + y.p0, Momentum(std::move(s))};
}

inline DMomentum wrap_to_zone(const DMomentum& q, const LatticeParams& params) {
  return {wrap_periodic(q.p0, pi / params.dt()), wrap_to_zone(q.p, params.a())};
}

struct DiagramSpec {
  DiagramKind kind = DiagramKind::Tree2to2;
  bool smeared = false;
  std::vector<DMomentum> incoming;
  std::vector<DMomentum> outgoing;  ///< empty means "equal to incoming"
  std::size_t n_p0 = 1u << 14;      ///< frequency nodes for loop integrals
  std::size_t n_p = 256;            ///< nodes per spatial dimension
  double epsilon = 1e-3;            ///< dimensionless denominator shift
  double tol = 1e-6;                ///< allowed change under node halving
};

/// Vertex factor -i lambda, times prod F(p) over the four line momenta when smeared.
inline cplx vertex_factor(const LatticeParams& params, bool smeared, std::span<const Momentum> lines) {
  cplx v = -I * params.lambda();
  if (smeared)
    for (const auto& p : lines) v *= smear_form_factor(params, p);
  return v;
}

inline constexpr double symmetry_factor(DiagramKind kind) {
  return kind == DiagramKind::Tree2to2 ? 1.0 : 0.5;
}

namespace detail {

inline void check_conservation(const LatticeParams& params, const std::vector<DMomentum>& in,
                               const std::vector<DMomentum>& out) {
  const double a = params.a(), h = params.dt();
  double e = 0.0;
  std::vector<double> p(params.d(), 0.0);
  for (const auto& q : in) {
    check_momentum(params, q.p);
    e += q.p0;
    for (int i = 0; i < params.d(); ++i) p[i] += q.p[i];
  }
  for (const auto& q : out) {
    check_momentum(params, q.p);
    e -= q.p0;
    for (int i = 0; i < params.d(); ++i) p[i] -= q.p[i];
  }
  constexpr double slack = 1e-9;
  require(std::abs(wrap_periodic(e * h, pi)) < slack, "external energies are not conserved mod 2 pi / dt");
  for (double x : p) require(std::abs(wrap_periodic(x * a, pi)) < slack, "external momenta are not conserved mod 2 pi / a");
}

/// Loop integral int d^Dq/(2pi)^D by tensor trapezoid with a halving check.
/// `make(q)` returns the frequency integrand at spatial loop momentum q.
template <class Factory>
cplx loop_integral(const LatticeParams& params, Factory&& make, const DiagramSpec& spec) {
  require(spec.n_p0 >= 2 && (spec.n_p0 & (spec.n_p0 - 1)) == 0, "n_p0 must be a power of two");
  require(spec.n_p >= 2 && (spec.n_p & (spec.n_p - 1)) == 0, "n_p must be a power of two");
  const int d = params.d();
  const std::vector<double> half(d, pi / params.a());
  auto rule = [&](std::size_t n0, std::size_t np) {
    auto spatial = [&](std::span<const double> k) {
      const auto temporal = make(Momentum(std::vector<double>(k.begin(), k.end())));
      return periodic_trapezoid<cplx>(temporal, pi / params.dt(), n0) / (2.0 * pi);
    };
    return periodic_trapezoid_nd<cplx>(spatial, half, np) / std::pow(2.0 * pi, d);
  };
  const cplx fine = rule(spec.n_p0, spec.n_p);
  const cplx coarse = rule(spec.n_p0 / 2, spec.n_p / 2);
  const double change = std::abs(fine - coarse);
  if (!(change <= spec.tol * std::max(1.0, std::abs(fine))))
    throw QuadratureNotConverged("loop integral changed by " + std::to_string(change) + " under node halving");
  return fine;
}

}  // namespace detail

/// Value of a catalog diagram (amputated, connected, symmetry factor included).
inline cplx evaluate_diagram(const DiagramSpec& spec, const LatticeParams& params) {
  const auto& in = spec.incoming;
  const auto& out = spec.outgoing.empty() ? spec.incoming : spec.outgoing;
  const double h = params.dt();
  const auto F = [&](const Momentum& q) { return spec.smeared ? smear_form_factor(params, q) : 1.0; };

  switch (spec.kind) {
    case DiagramKind::Tree2to2: {
      detail::require(in.size() == 2 && out.size() == 2, "Tree2to2 needs two incoming and two outgoing momenta");
      detail::check_conservation(params, in, out);
      const std::vector<Momentum> lines{in[0].p, in[1].p, out[0].p, out[1].p};
      return symmetry_factor(spec.kind) * vertex_factor(params, spec.smeared, lines);
    }
    case DiagramKind::TadpoleMass: {
      detail::require(params.m() > 0.0, "loop diagrams require m > 0");
      detail::require(in.size() == 1 && out.size() == 1, "TadpoleMass needs one incoming and one outgoing momentum");
      detail::check_conservation(params, in, out);
      const double ext = F(in[0].p) * F(out[0].p);
      const cplx loop = detail::loop_integral(
          params,
          [&](const Momentum& q) {
            const double w = F(q) * F(q);
            const double c = cosine_symbol(params, q);
            return [=, eps = spec.epsilon](double q0) { return w * feynman_from_cosine(c, q0, h, eps); };
          },
          spec);
      return symmetry_factor(spec.kind) * (-I * params.lambda()) * ext * loop;
    }
    case DiagramKind::BubbleSChannel: {
      detail::require(params.m() > 0.0, "loop diagrams require m > 0");
      detail::require(in.size() == 2 && out.size() == 2, "BubbleSChannel needs two incoming and two outgoing momenta");
      detail::check_conservation(params, in, out);
      const DMomentum P = in[0] + in[1];
      const double ext = F(in[0].p) * F(in[1].p) * F(out[0].p) * F(out[1].p);
      const cplx loop = detail::loop_integral(
          params,
          [&](const Momentum& q) {
            std::vector<double> r(q.size());
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = P.p[i] - q[i];
            const Momentum rz = wrap_to_zone(Momentum(std::move(r)), params.a());
            const double w = F(q) * F(q) * F(rz) * F(rz);
            const double c1 = cosine_symbol(params, q), c2 = cosine_symbol(params, rz);
            return [=, eps = spec.epsilon, P0 = P.p0](double q0) {
              return w * feynman_from_cosine(c1, q0, h, eps) * feynman_from_cosine(c2, P0 - q0, h, eps);
            };
          },
          spec);
      const cplx v = -I * params.lambda();
      return symmetry_factor(spec.kind) * v * v * ext * loop;
    }
  }
  throw UnknownDiagram("diagram kind " + std::to_string(static_cast<int>(spec.kind)) + " is not in the catalog");
}

enum class Regulator { ContinuumCutoff, ShiftPlain, ShiftSmeared };

inline const char* to_string(Regulator r) {
  switch (r) {
    case Regulator::ContinuumCutoff: return "continuum";
    case Regulator::ShiftPlain: return "shift_plain";
    case Regulator::ShiftSmeared: return "shift_smeared";
  }
  return "?";
}

struct OneLoopOptions {
  std::size_t resolution = 1024;          ///< initial trapezoid nodes (power of two)
  std::size_t max_resolution = 1u << 22;  ///< refinement cap
  double cutoff = 0.0;                    ///< Lambda for ContinuumCutoff; 0 means pi / a
  double tol = 1e-13;                     ///< relative change accepted under doubling
};

namespace detail {

/// Periodic trapezoid over (-pi/a, pi/a], doubling until the change is below tol.
template <class F>
double refine_zone_integral(F&& f, double half, const OneLoopOptions& opt) {
  require(opt.resolution >= 2 && (opt.resolution & (opt.resolution - 1)) == 0, "resolution must be a power of two");
  std::size_t n = opt.resolution;
  double prev = periodic_trapezoid<double>(f, half, n);
  while (n < opt.max_resolution) {
    n *= 2;
    const double next = periodic_trapezoid<double>(f, half, n);
    if (std::abs(next - prev) <= opt.tol * std::abs(next)) return next;
    prev = next;
  }
  throw QuadratureNotConverged("one-loop integral not converged at " + std::to_string(n) + " nodes");
}

}  // namespace detail

/// One-loop mass correction Pi for D = 2 (d = 1).
inline double one_loop_mass(Regulator reg, const LatticeParams& params, double p_in = 0.0,
                            const OneLoopOptions& opt = {}) {
  detail::require(params.d() == 1, "one-loop mass correction is implemented for d = 1");
  detail::require(params.m() > 0.0, "one-loop mass correction requires m > 0");
  const double a = params.a(), lam = params.lambda(), M = params.M();
  switch (reg) {
    case Regulator::ContinuumCutoff: {
      const double L = opt.cutoff > 0.0 ? opt.cutoff : pi / a;
      const double m = params.m();
      auto f = [m](double p) { return 1.0 / std::sqrt(p * p + m * m); };
      double err = 0.0;
      const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -L, L, 30, 1e-15, &err);
      if (!(err <= 1e-12 * std::abs(v)))
        throw QuadratureNotConverged("continuum one-loop integral error estimate " + std::to_string(err));
      return lam / (8.0 * pi) * v;
    }
    case Regulator::ShiftPlain:
    case Regulator::ShiftSmeared: {
      const bool smeared = reg == Regulator::ShiftSmeared;
      auto f = [&](double p) {
        const double c = M * std::cos(p * a);
        const double w = smeared ? (1.0 + std::cos(p * a)) * (1.0 + std::cos(p * a)) : 1.0;
        return a * w / std::sqrt((1.0 - c) * (1.0 + c));
      };
      const double integral = detail::refine_zone_integral(f, pi / a, opt) / (2.0 * pi);
      double prefactor = 1.0;
      if (smeared) {
        const double s = 1.0 + std::cos(wrap_periodic(p_in, pi / a) * a);
        prefactor = s * s / 16.0;
      }
      return prefactor * lam / 4.0 * integral;
    }
  }
  throw DomainError("unknown regulator");
}

/// Least-squares slope of Pi against ln(1/a).
inline double log_slope(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 4) throw IllConditionedFit("log_slope needs at least 4 points");
  double lo = 1e300, hi = -1e300, mx = 0.0, my = 0.0;
  for (const auto& [a, v] : series) {
    detail::require(a > 0.0 && std::isfinite(v), "series entries need a > 0 and finite values");
    const double x = std::log(1.0 / a);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    mx += x;
    my += v;
  }
  for (std::size_t i = 0; i < series.size(); ++i)
    for (std::size_t j = i + 1; j < series.size(); ++j)
      if (series[i].first == series[j].first) throw IllConditionedFit("lattice spacings must be distinct");
  if (hi - lo < std::log(10.0)) throw IllConditionedFit("ln(1/a) spans less than one decade");
  mx /= series.size();
  my /= series.size();
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [a, v] : series) {
    const double x = std::log(1.0 / a);
    sxy += (x - mx) * (v - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxy / sxx;
}

}  // namespace cqft
