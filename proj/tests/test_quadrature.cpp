#include "test_support.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cqft/quadrature.hpp"

using namespace cqft;
using Catch::Approx;

TEST_CASE("compensated summation", "[quadrature]") {
  KahanSum<double> s;
  s.add(1.0);
  for (int i = 0; i < 1000000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == Approx(1e-10).epsilon(1e-9));

  KahanSum<std::complex<double>> z;
  z.add({1e16, -1e16});
  z.add({1.0, 2.0});
  z.add({-1e16, 1e16});
  CHECK(z.value() == std::complex<double>(1.0, 2.0));
}

TEST_CASE("periodic trapezoid is spectrally accurate", "[quadrature]") {
  // int_{-pi}^{pi} dx / (2 - cos x) = 2 pi / sqrt(3)
  auto f = [](double x) { return 1.0 / (2.0 - std::cos(x)); };
  const double exact = 2.0 * pi / std::sqrt(3.0);
  CHECK(periodic_trapezoid<double>(f, pi, 64) == Approx(exact).epsilon(1e-15));

  // Independent oracle: adaptive Gauss-Kronrod.
  auto g = [](double x) { return std::exp(std::cos(x)) * std::cos(3.0 * x); };
  const double gk = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, -pi, pi, 15, 1e-15);
  CHECK(periodic_trapezoid<double>(g, pi, 64) == Approx(gk).epsilon(1e-13));

  auto h = [](std::span<const double> x) { return std::cos(x[0]) * std::cos(x[0]) + std::sin(pi * x[1]); };
  const double half[2] = {pi, 2.0};
  const double vol = 2.0 * pi * 4.0;
  CHECK(periodic_trapezoid_nd<double>(h, std::span<const double>(half), 16) == Approx(vol / 2.0).epsilon(1e-14));
}

TEST_CASE("doubling check", "[quadrature]") {
  auto rule = [](std::size_t n) {
    return periodic_trapezoid<double>([](double x) { return 1.0 / (1.01 - std::cos(x)); }, pi, n);
  };
  CHECK_THROWS_AS(doubling_check<double>(rule, 8, 1e-12), QuadratureNotConverged);
  const auto r = doubling_check<double>(rule, 2048, 1e-12);
  CHECK(r.value == Approx(2.0 * pi / std::sqrt(1.01 * 1.01 - 1.0)).epsilon(1e-13));
  CHECK_THROWS_AS(doubling_check<double>(rule, 100, 1e-12), DomainError);
}
