#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "common.hpp"
#include "doctest.h"
#include "homog/axisym.hpp"
#include "homog/homo2d.hpp"
#include "homog/onsager.hpp"
#include "homog/residuals.hpp"

using namespace homog;
using homog::testing::kPi;
using homog::testing::max_abs_diff;

TEST_SUITE("onsager") {

TEST_CASE("stream field of the rotational family") {
  auto g = SphereGrid::build(64, 128);
  auto rot = rotational(-1, 1, g);
  auto sf = build_stream_field(rot);
  CHECK(sf.alpha == -1.0);
  auto r = gauge_residual(sf, rot);
  CHECK(r.reconstruction < 1e-8);
  CHECK(r.max() < 1e-8);
  CHECK(norm_linf((2 - sf.alpha) * perp(sf.psi) - perp(grad(sf.h)) - rot.v) < 1e-8);
}

TEST_CASE("stream field recovers the normal component") {
  auto g = SphereGrid::build(64, 128);
  auto irr = irrotational(2, 0, 1, g);
  auto sf = build_stream_field(irr);
  CHECK(max_abs_diff(curl(sf.psi), sph_harmonic(2, 0, g)) < 1e-8);
  CHECK(gauge_residual(sf, irr).max() < 1e-8);
  CHECK(std::abs((3 - sf.alpha) * quadrature(sf.h)) < 1e-10);
}

TEST_CASE("stream field preconditions") {
  auto g = SphereGrid::build(16, 32);
  CHECK_THROWS_AS(build_stream_field(radial(1, g)), std::invalid_argument);
  auto s = rotational(-1, 1, g);
  s.f = ScalarField(g, 1.0);
  CHECK_THROWS_AS(build_stream_field(s), SolvabilityError);
}

TEST_CASE("stream field converges spectrally") {
  double prev = 0.0;
  for (int n : {32, 64}) {
    auto g = SphereGrid::build(n, 2 * n);
    auto s = conical_axisym(-10, 0.6, 0.8, g);
    const double r = gauge_residual(build_stream_field(s), s).max();
    if (prev > 0.0) CHECK(prev / r > 4.0);
    prev = r;
  }
  CHECK(prev < 1e-7);
}

TEST_CASE("gauge freedom") {
  auto g = SphereGrid::build(48, 96);
  auto s = irrotational(3, 1, 1, g);
  auto sf = build_stream_field(s);
  auto phi = sample(g, [](double p, double t) {
    return std::exp(std::cos(p)) * std::sin(t) * std::sin(p) + std::cos(p);
  });
  auto shifted = shift_gauge(sf, phi);
  CHECK(norm_linf(curl(shifted.psi) - curl(sf.psi)) < 1e-10);
  auto r = gauge_residual(shifted, s);
  CHECK(r.reconstruction < 1e-10);
  CHECK(r.curl < 1e-10);
}

TEST_CASE("resonant gauge at odd alpha") {
  auto g = SphereGrid::build(48, 96);
  auto s = conical_axisym(-3, 0.6, 0.8, g);
  auto sf = build_stream_field(s);
  CHECK(sf.resonant_residual > 1e-2);
  auto even = build_stream_field(conical_axisym(-10, 0.6, 0.8, g));
  CHECK(even.resonant_residual < 1e-12);
}

TEST_CASE("flux") {
  auto g = SphereGrid::build(32, 64);
  CHECK(flux(rotational(-2, 1, g)) == 0.0);
  CHECK(std::abs(flux(irrotational(3, 2, 1, g))) < 1e-14);
  PeriodicFunction z{[](double) { return 1.0; }, [](double) { return 0.0; }};
  CHECK(std::abs(flux(parallel_shear(-1, z, g))) < 1e-15);
  auto manufactured = rotational(-1, 1, g);
  manufactured.f = sample(g, [](double p, double) { return std::cos(p) * std::cos(p) - 1.0 / 3.0; });
  // H = 2 sin^2 + f^2; integrate f H in x = cos(phi)
  const double oracle = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [](double x) {
        const double f = x * x - 1.0 / 3.0;
        return 2 * kPi * f * (2 * (1 - x * x) + f * f);
      },
      -1.0, 1.0, 10, 1e-14);
  CHECK(oracle == doctest::Approx(-2 * kPi * 304.0 / 945.0).epsilon(1e-13));
  CHECK(flux(manufactured) == doctest::Approx(-0.5 * oracle).epsilon(1e-12));
  CHECK(std::abs(flux(manufactured)) > 1e-2);
}

TEST_CASE("moment identities") {
  auto g = SphereGrid::build(64, 128);
  auto rows = moment_identities(radial(1, g), 4, 1e-7);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].f_exempt);
  for (const auto& r : rows) CHECK(r.pass);
  CHECK(rows[0].f_moment == doctest::Approx(4 * kPi).epsilon(1e-13));

  for (const auto& sol : {conical_axisym(-10, 0.6, 0.8, g), irrotational(3, 1, 1, g),
                          lift_2d(elliptic_exceptional(2, 1), g)}) {
    auto m = moment_identities(sol, 4, 1e-7);
    for (const auto& r : m) {
      CHECK(r.pass);
      CHECK_FALSE(r.f_exempt);
    }
    CHECK(m[1].f_moment < 1e-8);
  }

  HomogeneousSolution junk;
  junk.alpha = -1.5;
  junk.f = sample(g, [](double p, double) { return 1.0 + std::cos(p); });
  junk.v = sample_tangent(g, [](double, double) { return 0.0; },
                          [](double p, double) { return std::sin(p) * (1 + std::cos(p)); });
  junk.p = sample(g, [](double p, double) { return std::cos(p); });
  auto bad = moment_identities(junk, 2, 1e-7);
  CHECK_FALSE(bad[0].pass);
  CHECK(bad[0].f_moment > 1.0);
  CHECK(bad[1].bound == doctest::Approx(1e-7 * std::max(1.0, norm_linf(compute_H(junk)))));
}

TEST_CASE("Landau profiles") {
  auto lam = landau_smooth(0.3, 2.0);
  CHECK(landau_residual(lam) < 1e-12);
  for (double x : {-1.0, 1.0}) {
    CHECK(lam.psi(x) == 0.0);
    // d psi / d phi = -sin(phi) psi'(x) vanishes at the poles
    CHECK(std::abs(std::sqrt(1 - x * x) * lam.dpsi(x)) == 0.0);
  }
  CHECK_THROWS_AS(landau_smooth(0.3, 0.5), std::invalid_argument);

  LandauProfile one{0.0, 0.0, 0.0, 1.0, [](double) { return 1.0; }, [](double) { return 0.0; }};
  CHECK(landau_residual(one) == 0.0);
  LandauProfile numeric{0.3, 0.0, 0.0, 0.0, lam.psi, {}};
  CHECK(landau_residual(numeric) < 1e-8);
}

TEST_CASE("Euler branch") {
  auto a = euler_axistokes(1, 0, 1);
  CHECK(a.feasible);
  CHECK(a.constraint_set == 1);
  CHECK_FALSE(a.smooth);
  CHECK(landau_residual(a.profile) < 1e-10);

  auto z = euler_axistokes(0, 0, 0);
  CHECK(z.feasible);
  CHECK(z.smooth);
  CHECK(z.profile.psi(0.3) == 0.0);

  CHECK_FALSE(euler_axistokes(1, 3, 1).feasible);

  auto b = euler_axistokes(1, 2.5, 2);
  CHECK(b.feasible);
  CHECK(landau_residual(b.profile) < 1e-10);
  auto c = euler_axistokes(0.5, 1.5, 1.0);
  CHECK(c.feasible);
  CHECK(c.constraint_set == 2);
  CHECK(landau_residual(c.profile) < 1e-10);
}

TEST_CASE("Stokes relation at zero viscosity") {
  const double A = 1, B = 0.5, C = 2;
  auto pr = euler_axistokes(A, B, C).profile;
  for (double phi = 0.2; phi < 3.0; phi += 0.3) {
    auto s = stokes_fields(pr, phi);
    const double x = std::cos(phi);
    CHECK(s.a == doctest::Approx(-std::sqrt(A * x * x + B * x + C) / std::sin(phi)));
    const double h = 1e-5;
    const double fp = (stokes_fields(pr, phi + h).f - stokes_fields(pr, phi - h).f) / (2 * h);
    AxiState st{phi, s.f, s.a, 0.0, -(A + s.a * s.a) / 2, 1.0};
    CHECK(std::abs(axi_normal_residual(st, fp)) < 1e-8);
  }
}

TEST_CASE("vanishing viscosity") {
  auto rows = vanishing_viscosity_study({1.0, 0.1, 0.01, 0.0}, 2.0);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) CHECK(r.residual < 1e-12);
  CHECK(rows[0].sup_psi / rows[1].sup_psi == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(rows[1].sup_psi / rows[2].sup_psi == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(rows[3].sup_psi == 0.0);
  auto half = vanishing_viscosity_study({0.4, 0.2}, 3.0);
  CHECK(half[0].sup_psi == doctest::Approx(2 * half[1].sup_psi).epsilon(1e-12));
  CHECK_THROWS_AS(vanishing_viscosity_study({0.1}, 1.0), std::invalid_argument);
}

}
