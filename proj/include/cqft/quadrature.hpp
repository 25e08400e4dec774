#pragma once

// Compensated summation and periodic trapezoid rules on tori.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "cqft/errors.hpp"

namespace cqft {

/// Neumaier-compensated accumulator for double or std::complex<double>.
template <class T>
class KahanSum {
 public:
  void add(const T& x) {
    if constexpr (std::is_same_v<T, double>) {
      add_real(sum_, comp_, x);
    } else {
      double sr = sum_.real(), cr = comp_.real();
      double si = sum_.imag(), ci = comp_.imag();
      add_real(sr, cr, x.real());
      add_real(si, ci, x.imag());
      sum_ = {sr, si};
      comp_ = {cr, ci};
    }
  }
  T value() const { return sum_ + comp_; }

 private:
  static void add_real(double& s, double& c, double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  T sum_{};
  T comp_{};
};

/// Node k of an n-point periodic rule on (-half, half]: -half + (k + 1) * 2 half / n.
inline double periodic_node(std::size_t k, std::size_t n, double half) {
  return -half + 2.0 * half * static_cast<double>(k + 1) / static_cast<double>(n);
}

/// Trapezoid rule for the mean-weighted integral  int_{-half}^{half} f(x) dx.
template <class T, class F>
T periodic_trapezoid(F&& f, double half, std::size_t n) {
  detail::require(n >= 1, "quadrature needs at least one node");
  KahanSum<T> acc;
  for (std::size_t k = 0; k < n; ++k) acc.add(static_cast<T>(f(periodic_node(k, n, half))));
  return acc.value() * (2.0 * half / static_cast<double>(n));
}

/// Tensor-product trapezoid over prod_i (-half_i, half_i]; f receives the node
/// coordinates as a span.
template <class T, class F>
T periodic_trapezoid_nd(F&& f, std::span<const double> half, std::size_t n) {
  detail::require(n >= 1, "quadrature needs at least one node");
  const std::size_t dim = half.size();
  detail::require(dim >= 1, "quadrature needs at least one dimension");
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> x(dim);
  double volume = 1.0;
  for (double h : half) volume *= 2.0 * h / static_cast<double>(n);
  KahanSum<T> acc;
  for (;;) {
    for (std::size_t i = 0; i < dim; ++i) x[i] = periodic_node(idx[i], n, half[i]);
    acc.add(static_cast<T>(f(std::span<const double>(x))));
    std::size_t i = 0;
    for (; i < dim; ++i) {
      if (++idx[i] < n) break;
      idx[i] = 0;
    }
    if (i == dim) break;
  }
  return acc.value() * volume;
}

template <class T>
struct QuadratureResult {
  T value{};          ///< estimate with the finer rule
  T coarse{};         ///< estimate with half the nodes
  double change = 0;  ///< |value - coarse|
  std::size_t nodes = 0;
};

/// Evaluates `rule(n / 2)` and `rule(n)`; throws QuadratureNotConverged when
/// the change exceeds tol * max(1, |value|).
template <class T, class Rule>
QuadratureResult<T> doubling_check(Rule&& rule, std::size_t n, double tol) {
  detail::require(n >= 2 && (n & (n - 1)) == 0, "node count must be a power of two >= 2");
  QuadratureResult<T> r;
  r.coarse = rule(n / 2);
  r.value = rule(n);
  r.nodes = n;
  r.change = std::abs(r.value - r.coarse);
  const double scale = std::max(1.0, std::abs(r.value));
  if (!(r.change <= tol * scale))
    throw QuadratureNotConverged("change " + std::to_string(r.change) + " between " +
                                 std::to_string(n / 2) + " and " + std::to_string(n) +
                                 " nodes exceeds tolerance " + std::to_string(tol));
  return r;
}

}  // namespace cqft
