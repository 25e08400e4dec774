#include "cqft/statevector.hpp"

#include "test_support.hpp"

using namespace cqft;
using cqft::testing::uniform;

namespace {

LatticeParams chain_params(double a = 0.5, double dt = 0.5, double m = 1.0, double lambda = 0.0) {
  LatticeConfig c;
  c.a = a;
  c.dt = dt;
  c.m = m;
  c.lambda = lambda;
  return LatticeParams(c);
}

double unitarity_defect(const Eigen::MatrixXcd& U) {
  return (U.adjoint() * U - Eigen::MatrixXcd::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff();
}

std::vector<int> random_config(const TruncatedLattice& lat, int lo, int hi) {
  std::vector<int> c(lat.L);
  for (auto& x : c) x = static_cast<int>(uniform(lo, hi));
  return c;
}

}  // namespace

TEST_CASE("field grid construction and validation", "[statevector]") {
  const FieldGrid g(16, 0.25);
  CHECK(g.value(8) == 0.0);
  CHECK(g.value(0) == -2.0);
  CHECK(g.extent() == 2.0);
  // Symmetric up to the one unpaired endpoint of the periodic grid.
  for (int j = 1; j < 16; ++j) CHECK(g.value(j) == -g.value(16 - j));

  CHECK_THROWS_AS(FieldGrid(6, 0.1), DomainError);
  CHECK_THROWS_AS(FieldGrid(15, 0.1), DomainError);
  CHECK_THROWS_AS(FieldGrid(16, 0.0), DomainError);

  const auto p = chain_params();
  const auto gm = FieldGrid::gauss_matched(32, p);
  CHECK(gm.delta_phi * gm.delta_phi * 32 == Catch::Approx(2.0 * pi * p.dt() / p.a()));
  CHECK(FieldGrid::fixed_extent(32, 3.0).extent() == Catch::Approx(3.0));
}

TEST_CASE("site operators", "[statevector]") {
  const FieldGrid g(32, 0.3);
  const auto ops = build_site_operators(g);
  for (int j = 0; j < 32; ++j) CHECK(ops.X(j, j) == cplx(g.value(j)));
  CHECK((ops.X - ops.X.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((ops.P - ops.P.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  // P^2 spectrum equals the squared conjugate momenta.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ops.P * ops.P);
  std::vector<double> want;
  for (int k = 0; k < 32; ++k) want.push_back(std::pow(g.conjugate_momentum(k), 2));
  std::sort(want.begin(), want.end());
  for (int k = 0; k < 32; ++k) CHECK(es.eigenvalues()(k) == Catch::Approx(want[k]).margin(1e-10));

  SECTION("commutator on a Gaussian well inside the grid") {
    const FieldGrid fine(128, std::sqrt(2.0 * pi / 128));
    const auto o = build_site_operators(fine);
    Eigen::VectorXcd psi(128);
    for (int j = 0; j < 128; ++j) psi(j) = std::exp(-0.5 * std::pow(fine.value(j), 2));
    psi.normalize();
    const Eigen::VectorXcd comm = o.X * (o.P * psi) - o.P * (o.X * psi);
    CHECK((comm - cplx(0.0, 1.0) * psi).norm() < 1e-3);
  }
}

TEST_CASE("lattice dimension caps", "[statevector]") {
  const auto p = chain_params();
  CHECK_NOTHROW(TruncatedLattice(5, FieldGrid(16, 0.3), p));  // exactly 2^20
  CHECK_THROWS_AS(TruncatedLattice(3, FieldGrid(16, 0.3), p, 4095), DimensionCap);
  CHECK_THROWS_AS(TruncatedLattice(6, FieldGrid(16, 0.3), p), DimensionCap);
  CHECK_THROWS_AS(TruncatedLattice(1, FieldGrid(16, 0.3), p), DomainError);
  LatticeConfig c2;
  c2.d = 2;
  CHECK_THROWS_AS(TruncatedLattice(2, FieldGrid(16, 0.3), LatticeParams(c2)), DomainError);

  const TruncatedLattice lat(2, FieldGrid(64, 0.1), p);
  const auto U = build_step(lat, StepKind::Strang, 0.0);
  CHECK_THROWS_AS(U.dense(), DimensionCap);  // 4096 > 2048
}

TEST_CASE("configuration indexing round trips", "[statevector]") {
  const TruncatedLattice lat(3, FieldGrid(8, 0.5), chain_params());
  for (std::size_t c = 0; c < lat.dimension(); ++c) CHECK(lat.index(lat.config(c)) == c);
  CHECK(lat.index({1, 0, 0}) == 1);
  CHECK(lat.index({0, 1, 0}) == 8);
  CHECK_THROWS_AS(lat.index({0, 8, 0}), DomainError);
  CHECK_THROWS_AS(lat.index({0, 0}), DomainError);
}

TEST_CASE("steps and layers are unitary", "[statevector]") {
  const auto p = chain_params();
  const TruncatedLattice lat(2, FieldGrid::gauss_matched(16, p), p);
  for (auto kind : {StepKind::Strang, StepKind::Trotter, StepKind::Shift}) {
    for (double lambda : {0.0, 0.3}) {
      const auto U = build_step(lat, kind, lambda);
      CHECK(unitarity_defect(U.dense()) < 1e-10);
      for (const auto& layer : U.layers()) {
        if (layer.type == Layer::Type::Diagonal)
          CHECK((layer.diag.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
        else
          CHECK(unitarity_defect(layer.site) < 1e-10);
      }
    }
  }
}

TEST_CASE("Strang step commutes with translations", "[statevector]") {
  const auto p = chain_params();
  const TruncatedLattice lat(3, FieldGrid::gauss_matched(8, p), p);
  const auto perm = translation_permutation(lat);
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(lat.dimension(), lat.dimension());
  for (std::size_t c = 0; c < perm.size(); ++c) T(perm[c], c) = 1.0;
  for (auto kind : {StepKind::Strang, StepKind::Shift}) {
    const auto U = build_step(lat, kind, 0.0).dense();
    CHECK((U * T - T * U).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("amplitudes are invariant under cyclic relabeling", "[statevector]") {
  const auto p = chain_params();
  const TruncatedLattice lat(3, FieldGrid::gauss_matched(8, p), p);
  for (auto kind : {StepKind::Strang, StepKind::Trotter, StepKind::Shift}) {
    for (double lambda : {0.0, 0.7}) {
      for (int trial = 0; trial < 4; ++trial) {
        const auto ci = random_config(lat, 0, 8), cf = random_config(lat, 0, 8);
        const cplx base = amplitude_circuit(lat, kind, lambda, ci, cf, 2);
        auto si = ci, sf = cf;
        std::rotate(si.begin(), si.begin() + 1, si.end());
        std::rotate(sf.begin(), sf.begin() + 1, sf.end());
        CHECK(std::abs(amplitude_circuit(lat, kind, lambda, si, sf, 2) - base) < 1e-12);
      }
    }
  }
}

TEST_CASE("Strang rearrangement into Trotter steps", "[statevector]") {
  const auto p = chain_params(0.5, 0.5, 1.0);
  const TruncatedLattice lat(2, FieldGrid::gauss_matched(16, p), p);
  const double lambda = 0.4, h = p.dt();
  const int tau = 3;
  const auto lhs = build_step(lat, StepKind::Strang, lambda).power(tau).dense();

  const auto xhalf = potential_phases(lat, lambda, 0.5 * h);
  StepOperator rhs(lat, "rearranged");
  rhs.diagonal(xhalf).site(kinetic_kernel(lat, h));  // e^{-iH_P dt} e^{-iH_X dt/2}
  rhs.then(build_step(lat, StepKind::Trotter, lambda).power(tau - 1));
  rhs.diagonal(xhalf);
  CHECK((lhs - rhs.dense()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("circuit amplitude basics", "[statevector]") {
  const auto p = chain_params();
  const TruncatedLattice lat(2, FieldGrid::gauss_matched(16, p), p);
  CHECK(amplitude_circuit(lat, StepKind::Strang, 0.2, {3, 4}, {3, 4}, 0) == cplx(1.0));
  CHECK(amplitude_circuit(lat, StepKind::Strang, 0.2, {3, 4}, {4, 3}, 0) == cplx(0.0));
  for (auto kind : {StepKind::Strang, StepKind::Trotter, StepKind::Shift})
    for (int trial = 0; trial < 10; ++trial)
      CHECK(std::abs(amplitude_circuit(lat, kind, 0.3, random_config(lat, 0, 16), random_config(lat, 0, 16), 3)) <=
            1.0 + 1e-12);
  CHECK_THROWS_AS(amplitude_circuit(lat, StepKind::Strang, 0.0, {0, 0}, {0, 0}, -1), DomainError);
}

TEST_CASE("path sum equals circuit contraction", "[statevector]") {
  const auto p = chain_params();
  const TruncatedLattice lat(2, FieldGrid::gauss_matched(16, p), p);
  for (auto kind : {StepKind::Strang, StepKind::Trotter, StepKind::Shift}) {
    for (int tau : {1, 2, 3}) {
      const auto ci = random_config(lat, 4, 12), cf = random_config(lat, 4, 12);
      const cplx c = amplitude_circuit(lat, kind, 0.3, ci, cf, tau);
      const cplx s = amplitude_path_sum(lat, kind, 0.3, ci, cf, tau);
      CHECK(std::abs(c - s) < 1e-12);
    }
  }
  CHECK(amplitude_path_sum(lat, StepKind::Strang, 0.0, {1, 2}, {1, 2}, 0) == cplx(1.0));
}

TEST_CASE("path sum cap", "[statevector]") {
  const auto p = chain_params();
  const TruncatedLattice lat(2, FieldGrid::gauss_matched(32, p), p);
  // 32^4 terms: allowed.
  const cplx s = amplitude_path_sum(lat, StepKind::Strang, 0.1, {14, 17}, {16, 15}, 3);
  const cplx c = amplitude_circuit(lat, StepKind::Strang, 0.1, {14, 17}, {16, 15}, 3);
  CHECK(std::abs(s - c) < 1e-12);
  // 32^6 > 1e8 terms.
  CHECK_THROWS_AS(amplitude_path_sum(lat, StepKind::Strang, 0.1, {0, 0}, {0, 0}, 4), BruteForceCap);
  CHECK_THROWS_AS(amplitude_action_form(lat, 0.1, {0, 0}, {0, 0}, 4), BruteForceCap);
}

TEST_CASE("action form on the Gauss-matched grid", "[statevector]") {
  // With delta_phi^2 = 2 pi dt / (a n) the DFT kinetic kernel is exactly the
  // discrete Gaussian, so the Riemann sum reproduces the circuit at every n.
  const auto p = chain_params(0.5, 0.5, 1.0);
  for (double lambda : {0.0, 0.1}) {
    for (int n : {16, 32, 64, 128}) {
      const TruncatedLattice lat(2, FieldGrid::gauss_matched(n, p), p);
      const std::vector<int> ci{n / 2, n / 2 + 1}, cf{n / 2 - 1, n / 2};
      for (int tau : {1, 2}) {
        const cplx c = amplitude_circuit(lat, StepKind::Strang, lambda, ci, cf, tau);
        const cplx s = amplitude_action_form(lat, lambda, ci, cf, tau);
        INFO("lambda=" << lambda << " n=" << n << " tau=" << tau);
        CHECK(std::abs(s - c) <= 1e-12 * std::max(1.0, std::abs(c)));
      }
    }
  }
}

TEST_CASE("action form at fixed extent is limited by periodic images", "[statevector]") {
  // Diagnostic: a fixed field window does not make the DFT kernel approach the
  // continuum Gaussian, so the Riemann sum need not converge to the circuit.
  const auto p = chain_params(0.5, 0.5, 1.0);
  const double phi_max = FieldGrid::default_extent(p);
  for (int n : {16, 32, 64}) {
    const TruncatedLattice lat(2, FieldGrid::fixed_extent(n, phi_max), p);
    const std::vector<int> c0{n / 2, n / 2};
    const cplx c = amplitude_circuit(lat, StepKind::Strang, 0.1, c0, c0, 2);
    const cplx s = amplitude_action_form(lat, 0.1, c0, c0, 2);
    CHECK(std::isfinite(std::abs(s - c)));
    CHECK(std::abs(c) <= 1.0 + 1e-12);
  }
}

TEST_CASE("Gaussian kernel target", "[statevector]") {
  const FieldGrid g(64, std::sqrt(2.0 * pi / 64));
  // Exact on the matched grid.
  CHECK(kernel_gaussian_check(g) < 1e-12);

  // y = z = 0: modulus delta_phi / sqrt(2 pi), phase -pi/4.
  const auto K = momentum_function(g, [](double k) { return std::polar(1.0, -0.5 * k * k); });
  const cplx k00 = K(32, 32);
  CHECK(std::abs(k00) / g.delta_phi == Catch::Approx(0.3989422804014327).epsilon(1e-12));
  CHECK(std::arg(k00) == Catch::Approx(-0.25 * pi).epsilon(1e-12));

  // (y - z)^2 / 2 = pi flips the sign relative to y = z.
  const double d = std::sqrt(2.0 * pi);
  const cplx t0 = std::polar(1.0, -0.25 * pi), t1 = std::polar(1.0, -0.25 * pi + 0.5 * d * d);
  CHECK(std::abs(t1 + t0) < 1e-14);
}

TEST_CASE("kernel error decreases under scaled refinement", "[statevector]") {
  // Spacing shrinks like 1/sqrt(n) while the window grows like sqrt(n), at a
  // fixed ratio to the matched spacing.
  std::vector<double> errs;
  for (int n : {64, 128, 256, 512}) {
    const FieldGrid g(n, 1.2 * std::sqrt(2.0 * pi / n));
    errs.push_back(kernel_gaussian_check(g, 0.25));
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    INFO("n index " << i << " err " << errs[i] << " prev " << errs[i - 1]);
    CHECK(errs[i] < errs[i - 1]);
  }
}

TEST_CASE("interaction-picture product identity", "[statevector]") {
  const auto p = chain_params(0.5, 0.5, 1.0);
  const TruncatedLattice lat(2, FieldGrid::gauss_matched(12, p), p);
  for (auto kind : {StepKind::Strang, StepKind::Trotter, StepKind::Shift}) {
    for (int tau : {1, 2, 3}) {
      INFO(to_string(kind) << " tau=" << tau);
      CHECK(interaction_picture_check(lat, kind, 0.0, tau) < 1e-12);
      CHECK(interaction_picture_check(lat, kind, 0.3, tau) < 1e-10);
    }
  }
  // The wrong split is detected.
  const auto split = interaction_split(lat, StepKind::Strang, 0.3);
  const Eigen::MatrixXcd U = split.U.dense(), U0 = split.U0.dense();
  const Eigen::MatrixXcd naive = U0 * split.Uint.asDiagonal();
  CHECK(operator_norm(U - naive) > 1e-3);
}
