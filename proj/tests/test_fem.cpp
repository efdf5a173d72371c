#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sospec/enclosure.hpp"
#include "sospec/fem.hpp"
#include "sospec/pencil.hpp"

using namespace sospec;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("gauss-legendre rules are exact for polynomials of degree 2n-1") {
  for (int n : {2, 3, 5, 8}) {
    CAPTURE(n);
    const QuadratureRule quad = QuadratureRule::gauss_legendre(n);
    REQUIRE(quad.nodes.size() == n);
    CHECK(quad.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double acc = 0.0;
      for (int q = 0; q < n; ++q)
        acc += quad.weights[q] * std::pow(quad.nodes[q], deg);
      CHECK(acc == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("dof count and dirichlet numbering") {
  const UniformMesh mesh{0.0, 1.0, 4};
  for (int r : {3, 4, 5}) {
    CAPTURE(r);
    const HermiteSpace space(mesh, r);
    CHECK(space.dof_count() == (r - 1) * 4);
    CHECK(space.local_dof_count() == r + 1);
    // Endpoint values are removed, endpoint slopes retained.
    CHECK(space.global_index(0, 0) == -1);
    CHECK(space.global_index(0, 1) == 0);
    CHECK(space.global_index(3, 2) == -1);
    CHECK(space.global_index(3, 3) == 2 * 4 - 1);
    // Shared node between elements 0 and 1.
    CHECK(space.global_index(0, 2) == space.global_index(1, 0));
    CHECK(space.global_index(0, 3) == space.global_index(1, 1));
  }
  CHECK_THROWS_AS(HermiteSpace(mesh, 2), UnsupportedOrder);
  CHECK_THROWS_AS(HermiteSpace(mesh, 6), UnsupportedOrder);
}

TEST_CASE("cubic mass matrix matches the closed-form beam entries") {
  const UniformMesh mesh{0.0, 1.0, 4};
  const double h = mesh.h();
  const HermiteSpace space(mesh, 3);
  const PencilTriple p =
      assemble_schrodinger(space, Potential::zero(), default_quadrature(3));
  const RealMatrix m0 = p.m0.real();

  // Interior node 1 owns value dof 1 and slope dof 2.
  CHECK(m0(1, 1) == doctest::Approx(26.0 * h / 35.0).epsilon(1e-13));
  CHECK(m0(2, 2) == doctest::Approx(2.0 * h * h * h / 105.0).epsilon(1e-13));
  // Value-slope coupling at a shared node cancels between the two elements.
  CHECK(std::abs(m0(1, 2)) < 1e-16);
  // Value-value coupling of adjacent nodes.
  CHECK(m0(1, 3) == doctest::Approx(9.0 * h / 70.0).epsilon(1e-13));
  CHECK((p.m0 - Matrix(p.m0.adjoint())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("free-laplacian m1 equals the stiffness matrix") {
  const UniformMesh mesh{0.0, kPi, 6};
  for (int r : {3, 4, 5}) {
    CAPTURE(r);
    const HermiteSpace space(mesh, r);
    const QuadratureRule quad = default_quadrature(r);
    const PencilTriple p =
        assemble_schrodinger(space, Potential::zero(), quad);

    // Independent route: <A b_k, b_j> = int b_j' b_k' dx for V = 0.
    const Index nd = space.dof_count();
    RealMatrix stiff = RealMatrix::Zero(nd, nd);
    const double h = mesh.h();
    for (int e = 0; e < mesh.n_elem; ++e)
      for (int a = 0; a < space.local_dof_count(); ++a) {
        const Index ga = space.global_index(e, a);
        if (ga < 0) continue;
        for (int b = 0; b < space.local_dof_count(); ++b) {
          const Index gb = space.global_index(e, b);
          if (gb < 0) continue;
          double acc = 0.0;
          for (Index q = 0; q < quad.nodes.size(); ++q)
            acc += quad.weights[q] * space.shape(a, 1, quad.nodes[q]) *
                   space.shape(b, 1, quad.nodes[q]);
          stiff(ga, gb) += acc * h;
        }
      }
    const double scale = stiff.cwiseAbs().maxCoeff();
    CHECK((p.m1.real() - stiff).cwiseAbs().maxCoeff() < 1e-12 * scale);
  }
}

TEST_CASE("hermite interpolation of a cubic is exact") {
  const UniformMesh mesh{0.0, kPi, 5};
  const HermiteSpace space(mesh, 3);
  const auto f = [](double x) {
    return -x * x * x + (kPi - 1.0) * x * x + kPi * x;
  };
  const auto df = [](double x) {
    return -3.0 * x * x + 2.0 * (kPi - 1.0) * x + kPi;
  };
  // f vanishes at both ends, so its nodal values and slopes define a
  // coefficient vector: node 0 slope -> 0, node i (value, slope) -> (2i-1, 2i),
  // node N slope -> 2N - 1.
  RealVector coeffs = RealVector::Zero(space.dof_count());
  const int nn = mesh.n_elem;
  coeffs[0] = df(mesh.node(0));
  for (int i = 1; i < nn; ++i) {
    coeffs[2 * i - 1] = f(mesh.node(i));
    coeffs[2 * i] = df(mesh.node(i));
  }
  coeffs[2 * nn - 1] = df(mesh.node(nn));

  for (double x : {0.13, 0.7, 1.9, 2.5, 3.1}) {
    CHECK(space.evaluate(coeffs, x, 0) == doctest::Approx(f(x)).epsilon(1e-12));
    CHECK(space.evaluate(coeffs, x, 1) == doctest::Approx(df(x)).epsilon(1e-11));
  }
}

TEST_CASE("galerkin eigenvalues of the free laplacian approach j^2") {
  const UniformMesh mesh{0.0, kPi, 16};
  const HermiteSpace space(mesh, 3);
  const PencilTriple p =
      assemble_schrodinger(space, Potential::zero(), default_quadrature(3));
  const std::vector<double> gal = galerkin_spectrum(p);
  REQUIRE(gal.size() >= 3);
  CHECK(gal[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(gal[1] == doctest::Approx(4.0).epsilon(1e-5));
  CHECK(gal[2] == doctest::Approx(9.0).epsilon(1e-4));
}

TEST_CASE("best approximation error vanishes for members of the space") {
  const UniformMesh mesh{0.0, kPi, 4};
  const HermiteSpace space(mesh, 3);
  const auto f = [](double x) {
    return -x * x * x + (kPi - 1.0) * x * x + kPi * x;
  };
  const auto df = [](double x) {
    return -3.0 * x * x + 2.0 * (kPi - 1.0) * x + kPi;
  };
  const auto d2f = [](double x) { return -6.0 * x + 2.0 * (kPi - 1.0); };
  const ApproxErrors err =
      best_approx_error(space, f, df, d2f, default_quadrature(3));
  CHECK(err.l2 < 1e-10);
  CHECK(err.h1 < 1e-10);
  CHECK(err.h2 < 1e-9);
}

TEST_CASE("best approximation of sin converges at order h^2 in h2") {
  const auto f = [](double x) { return std::sin(x); };
  const auto df = [](double x) { return std::cos(x); };
  const auto d2f = [](double x) { return -std::sin(x); };
  double prev = 0.0;
  for (int i = 0; i < 3; ++i) {
    const int n = 4 << i;
    const HermiteSpace space(UniformMesh{0.0, kPi, n}, 3);
    const ApproxErrors err =
        best_approx_error(space, f, df, d2f, default_quadrature(3));
    if (i > 0) {
      const double ratio = prev / err.h2;
      CHECK(ratio > 3.4);
      CHECK(ratio < 4.6);
    }
    prev = err.h2;
  }
}

TEST_CASE("named potentials") {
  CHECK(Potential::mathieu()(0.0) == doctest::Approx(2.0));
  CHECK(Potential::mathieu()(kPi / 2.0) == doctest::Approx(-2.0));
  CHECK(Potential::crystal()(0.0) == doctest::Approx(0.0));
  CHECK(Potential::by_name("zero")(1.23) == 0.0);
  CHECK(Potential::by_name("mathieu").name == "mathieu");
  CHECK_THROWS_AS(Potential::by_name("unknown"), PreconditionError);
}

TEST_CASE("free laplacian second order spectrum encloses the first eigenvalue") {
  const UniformMesh mesh{0.0, kPi, 8};
  const HermiteSpace space(mesh, 3);
  const PencilTriple p =
      assemble_schrodinger(space, Potential::zero(), default_quadrature(3));
  const std::vector<double> gal = galerkin_spectrum(p);
  const SecondOrderSpectrum s =
      second_order_spectrum_shift_invert(p, gal.front() - 1.0);

  const SpectralPoint* best = nullptr;
  double best_d = 1e300;
  for (const auto& pt : s.points) {
    if (pt.value.imag() < 0.0) continue;
    const double d = std::abs(pt.value - Complex(1.0, 0.0));
    if (d < best_d) {
      best_d = d;
      best = &pt;
    }
  }
  REQUIRE(best != nullptr);
  CHECK(std::abs(best->value.real() - 1.0) < 1e-4);
  const EnclosureInterval res = residual_interval(best->value);
  CHECK(res.lo <= 1.0);
  CHECK(res.hi >= 1.0);
}
