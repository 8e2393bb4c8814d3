#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "common.hpp"
#include "doctest.h"
#include "homog/sphere.hpp"

using namespace homog;
using homog::testing::kPi;
using homog::testing::max_abs_diff;

TEST_SUITE("sphere") {

TEST_CASE("grid construction") {
  auto g = SphereGrid::build(8, 8);
  CHECK(g->size() == 64);
  double total = 0.0;
  for (double w : g->weights()) total += w;
  CHECK(total == doctest::Approx(4 * kPi).epsilon(1e-13));

  auto g2 = SphereGrid::build(16, 32);
  for (double w : g2->weights()) CHECK(w > 0.0);
  for (int j = 0; j < g2->nlat(); ++j) {
    CHECK(g2->phi(j) > 0.0);
    CHECK(g2->phi(j) < kPi);
    if (j > 0) CHECK(g2->phi(j) > g2->phi(j - 1));
  }
  for (int k = 1; k < g2->nlon(); ++k) {
    CHECK(g2->theta(k) - g2->theta(k - 1) == doctest::Approx(2 * kPi / 32).epsilon(1e-14));
  }

  CHECK_THROWS_AS(SphereGrid::build(4, 3), std::invalid_argument);
  CHECK_THROWS_AS(SphereGrid::build(3, 8), std::invalid_argument);
}

TEST_CASE("quadrature") {
  auto g = SphereGrid::build(16, 32);
  CHECK(quadrature(ScalarField(g, 1.0)) == doctest::Approx(4 * kPi).epsilon(1e-13));
  CHECK(std::abs(quadrature(sample(g, [](double p, double) { return std::cos(p); }))) < 1e-14);

  // Normalisation of Y20 against an adaptive 1D integral of the closed form.
  auto y20 = sph_harmonic(2, 0, g);
  const double oracle = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [](double p) {
        const double c = std::sqrt(5.0 / (16.0 * kPi)) * (3 * std::cos(p) * std::cos(p) - 1);
        return 2 * kPi * c * c * std::sin(p);
      },
      0.0, kPi, 10, 1e-14);
  CHECK(oracle == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(quadrature(y20 * y20) == doctest::Approx(oracle).epsilon(1e-12));

  for (int l = 1; l <= 8; ++l) {
    for (int m = -l; m <= l; ++m) CHECK(std::abs(quadrature(sph_harmonic(l, m, g))) < 1e-12);
  }
}

TEST_CASE("harmonic orthonormality") {
  auto g = SphereGrid::build(12, 24);
  for (int l = 0; l <= 5; ++l) {
    for (int m = -l; m <= l; ++m) {
      auto y = sph_harmonic(l, m, g);
      for (int l2 = 0; l2 <= 5; ++l2) {
        for (int m2 = -l2; m2 <= l2; ++m2) {
          const double q = quadrature(y * sph_harmonic(l2, m2, g));
          const double expect = (l == l2 && m == m2) ? 1.0 : 0.0;
          CHECK(std::abs(q - expect) < 1e-12);
        }
      }
    }
  }
  auto y00 = sph_harmonic(0, 0, g);
  CHECK(max_abs_diff(y00, [](double, double) { return 1.0 / std::sqrt(4 * kPi); }) < 1e-15);
  auto y10 = sph_harmonic(1, 0, g);
  CHECK(max_abs_diff(y10, [](double p, double) { return std::sqrt(3 / (4 * kPi)) * std::cos(p); }) <
        1e-14);
  CHECK_THROWS_AS(sph_harmonic(2, 3, g), std::invalid_argument);
}

TEST_CASE("gradient") {
  for (auto scheme : {DerivativeScheme::Spectral, DerivativeScheme::FiniteDifference4}) {
    CAPTURE(static_cast<int>(scheme));
    const double tol = scheme == DerivativeScheme::Spectral ? 1e-12 : 1e-4;
    auto g = SphereGrid::build(32, 64);
    auto w = grad(sample(g, [](double p, double) { return std::cos(p); }), scheme);
    CHECK(max_abs_diff(w.a_field(), [](double p, double) { return -std::sin(p); }) < tol);
    CHECK(norm_linf(w.b_field()) < tol);

    CHECK(norm_linf(grad(ScalarField(g, 2.5), scheme)) < tol);

    auto w2 = grad(sample(g, [](double p, double t) { return std::sin(p) * std::sin(t); }), scheme);
    CHECK(max_abs_diff(w2.a_field(), [](double p, double t) { return std::cos(p) * std::sin(t); }) <
          tol);
    CHECK(max_abs_diff(w2.b_field(), [](double, double t) { return std::cos(t); }) < tol);
  }
}

TEST_CASE("divergence and curl") {
  auto g = SphereGrid::build(32, 64);
  auto cosp = sample(g, [](double p, double) { return std::cos(p); });
  CHECK(max_abs_diff(div(grad(cosp)), -2.0 * cosp) < 1e-12);

  auto s = homog::testing::random_bandlimited(g, 10, 7);
  CHECK(norm_linf(div(perp(grad(s)))) < 1e-11);
  CHECK(norm_linf(curl(grad(s))) < 1e-11);

  auto rot = sample_tangent(g, [](double, double) { return 0.0; },
                            [](double p, double) { return std::sin(p); });
  CHECK(norm_linf(div(rot)) < 1e-13);
  CHECK(max_abs_diff(curl(rot), 2.0 * cosp) < 1e-12);
  CHECK(max_abs_diff(curl(perp(grad(cosp))), -2.0 * cosp) < 1e-12);
  // curl(perp(grad s)) = laplace(s)
  CHECK(max_abs_diff(curl(perp(grad(s))), laplace_beltrami(s)) < 1e-9);
}

TEST_CASE("perp") {
  auto g = SphereGrid::build(8, 8);
  auto e = sample_tangent(g, [](double, double) { return 1.0; }, [](double, double) { return 0.0; });
  auto pe = perp(e);
  CHECK(norm_linf(pe.a_field()) == 0.0);
  CHECK(max_abs_diff(pe.b_field(), ScalarField(g, 1.0)) == 0.0);

  auto w = sample_tangent(g, [](double p, double t) { return std::sin(p + t); },
                          [](double p, double t) { return std::cos(3 * p - t); });
  CHECK(norm_linf(perp(perp(w)) + w) == 0.0);
  CHECK(norm_linf(dot(w, perp(w))) == 0.0);
  CHECK(max_abs_diff(dot(perp(w), perp(w)), dot(w, w)) == 0.0);
}

TEST_CASE("covariant derivative pins the perp convention") {
  // v.grad v - grad |v|^2 / 2 = omega perp(v)
  auto g = SphereGrid::build(24, 48);
  auto s1 = homog::testing::random_bandlimited(g, 6, 1);
  auto s2 = homog::testing::random_bandlimited(g, 6, 2);
  auto v = grad(s1) + perp(grad(s2));
  auto lhs = covariant_derivative(v, v) - 0.5 * grad(dot(v, v));
  auto rhs = curl(v) * perp(v);
  CHECK(norm_linf(lhs - rhs) < 1e-10);
}

TEST_CASE("laplace-beltrami spectrum") {
  auto g = SphereGrid::build(40, 80);
  CHECK(max_abs_diff(laplace_beltrami(sph_harmonic(1, 0, g)), -2.0 * sph_harmonic(1, 0, g)) < 1e-12);
  CHECK(max_abs_diff(laplace_beltrami(sph_harmonic(2, 1, g)), -6.0 * sph_harmonic(2, 1, g)) < 1e-11);
  CHECK(norm_linf(laplace_beltrami(ScalarField(g, 3.0))) < 1e-12);
  for (int l = 0; l <= 16; ++l) {
    for (int m : {0, l / 2, l}) {
      auto y = sph_harmonic(l, m, g);
      const double rel = norm_linf(laplace_beltrami(y) + double(l * (l + 1)) * y) /
                         std::max(1.0, double(l * (l + 1)) * norm_linf(y));
      CAPTURE(l);
      CAPTURE(m);
      CHECK(rel < 1e-8);
    }
  }
}

TEST_CASE("finite-difference fallback agrees within its error model") {
  double prev = 0.0;
  for (int n : {32, 64}) {
    auto g = SphereGrid::build(n, 2 * n);
    auto s = sample(g, [](double p, double t) { return std::sin(p) * std::sin(p) * std::cos(2 * t); });
    const double err = norm_linf(laplace_beltrami(s, DerivativeScheme::FiniteDifference4) -
                                 laplace_beltrami(s));
    if (prev > 0.0) CHECK(prev / err > 8.0);
    prev = err;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("discrete adjointness") {
  auto g = SphereGrid::build(32, 64);
  for (unsigned seed = 0; seed < 4; ++seed) {
    auto s = homog::testing::random_bandlimited(g, 12, seed);
    auto w = grad(homog::testing::random_bandlimited(g, 12, seed + 100)) +
             perp(grad(homog::testing::random_bandlimited(g, 12, seed + 200)));
    CHECK(std::abs(quadrature(s * div(w)) + quadrature(dot(w, grad(s)))) < 1e-9);
  }
}

TEST_CASE("advection") {
  auto g = SphereGrid::build(32, 64);
  auto s = homog::testing::random_bandlimited(g, 8, 3);
  CHECK(max_abs_diff(advect(grad(s), s), dot(grad(s), grad(s))) < 1e-11);
  auto rot = sample_tangent(g, [](double, double) { return 0.0; },
                            [](double p, double) { return std::sin(p); });
  CHECK(norm_linf(advect(rot, ScalarField(g, 4.0))) < 1e-13);
  auto s2 = sample(g, [](double p, double t) { return std::sin(p) * std::cos(t); });
  CHECK(max_abs_diff(advect(rot, s2), [](double p, double t) { return -std::sin(p) * std::sin(t); }) <
        1e-12);
}

TEST_CASE("harmonic transform round trip") {
  auto g = SphereGrid::build(20, 40);
  auto s = homog::testing::random_bandlimited(g, 15, 11);
  CHECK(max_abs_diff(sh_synthesis(sh_analysis(s), g), s) < 1e-12);
}

TEST_CASE("poisson solve") {
  auto g = SphereGrid::build(24, 48);
  auto cosp = sample(g, [](double p, double) { return std::cos(p); });
  CHECK(max_abs_diff(poisson_solve(-2.0 * cosp), cosp) < 1e-13);
  auto y20 = sph_harmonic(2, 0, g);
  CHECK(max_abs_diff(poisson_solve(-6.0 * y20), y20) < 1e-13);
  CHECK_THROWS_AS(poisson_solve(ScalarField(g, 1.0)), SolvabilityError);

  auto s = homog::testing::random_bandlimited(g, 10, 5);
  auto rhs = laplace_beltrami(s);
  auto u = poisson_solve(rhs);
  CHECK(std::abs(quadrature(u)) < 1e-12);
  CHECK(max_abs_diff(laplace_beltrami(u), rhs) < 1e-10);
}

TEST_CASE("helmholtz solve reports resonance") {
  auto g = SphereGrid::build(16, 32);
  auto y31 = sph_harmonic(3, 1, g);
  auto y1 = sph_harmonic(1, 0, g);
  auto r = helmholtz_solve(y31 + y1, 12.0);  // l = 3 is in the kernel
  CHECK(r.resonant_residual == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_abs_diff(r.solution, (1.0 / 10.0) * y1) < 1e-13);
  auto r2 = helmholtz_solve(y1, 1.0);
  CHECK(r2.resonant_residual == 0.0);
  CHECK(max_abs_diff(r2.solution, -1.0 * y1) < 1e-13);
}

TEST_CASE("pointwise algebra") {
  auto g = SphereGrid::build(8, 8);
  auto x = sample(g, [](double p, double) { return p; });
  auto y = sample(g, [](double, double t) { return t; });
  CHECK(max_abs_diff(x + y - y, x) < 1e-15);
  CHECK(max_abs_diff(map(x, [](double v) { return v * v; }), x * x) == 0.0);
  auto u = sample_tangent(g, [](double, double) { return 1.0; }, [](double, double) { return 2.0; });
  auto v = sample_tangent(g, [](double, double) { return 3.0; }, [](double, double) { return 5.0; });
  CHECK(max_abs_diff(cross_normal(u, v), ScalarField(g, -1.0)) == 0.0);
  CHECK(norm_l2(ScalarField(g, 1.0)) == doctest::Approx(std::sqrt(4 * kPi)));
}

}
