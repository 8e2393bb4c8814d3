#include "homog/onsager.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/differentiation/finite_difference.hpp>
#include <boost/math/tools/minima.hpp>

#include "homog/errors.hpp"
#include "homog/residuals.hpp"

namespace homog {

double GaugeResidual::max() const { return std::max({reconstruction, curl, divergence}); }

StreamField build_stream_field(const HomogeneousSolution& sol, DerivativeScheme scheme) {
  const double al = sol.alpha;
  if (al == 2.0) throw std::invalid_argument("stream-field needs alpha != 2");
  const ScalarField& f = sol.f;
  const double mean = quadrature(f) / (4.0 * std::numbers::pi);
  if (std::abs(mean) >= 1e-8 * std::max(1.0, norm_linf(f))) {
    throw SolvabilityError("stream-field needs a mean-zero normal component");
  }

  // curl(perp grad chi) = Delta chi = f
  const ScalarField chi = poisson_solve(f);
  const TangentField psi0 = perp(grad(chi, scheme));

  // Delta h = (2 - alpha) div psi - omega
  const ScalarField omega = curl(sol.v, scheme);
  ScalarField rhs = (2.0 - al) * div(psi0, scheme) - omega;
  const double rhs_mean = quadrature(rhs) / (4.0 * std::numbers::pi);
  for (double& v : rhs.values) v -= rhs_mean;
  const ScalarField h0 = poisson_solve(rhs);

  const double shift = (3.0 - al) * (2.0 - al);
  const HelmholtzResult gauge = helmholtz_solve(-(3.0 - al) * h0 - div(psi0, scheme), shift);

  StreamField sf;
  sf.alpha = al;
  sf.psi = psi0 + grad(gauge.solution, scheme);
  sf.h = h0 + (2.0 - al) * gauge.solution;
  sf.resonant_residual = gauge.resonant_residual;
  return sf;
}

GaugeResidual gauge_residual(const StreamField& sf, const HomogeneousSolution& sol,
                             DerivativeScheme scheme) {
  const double al = sf.alpha;
  GaugeResidual r;
  r.reconstruction =
      norm_linf(sol.v - (2.0 - al) * perp(sf.psi) + perp(grad(sf.h, scheme)));
  r.curl = norm_linf(curl(sf.psi, scheme) - sol.f);
  r.divergence = norm_linf((3.0 - al) * sf.h + div(sf.psi, scheme));
  return r;
}

StreamField shift_gauge(const StreamField& sf, const ScalarField& phi, DerivativeScheme scheme) {
  StreamField out = sf;
  out.psi = sf.psi + grad(phi, scheme);
  out.h = sf.h + (2.0 - sf.alpha) * phi;
  return out;
}

double flux(const HomogeneousSolution& sol) {
  return -0.5 * quadrature(sol.f * compute_H(sol));
}

std::vector<MomentRow> moment_identities(const HomogeneousSolution& sol, int n_max, double tol,
                                         DerivativeScheme scheme) {
  std::vector<MomentRow> rows;
  if (n_max < 0) return rows;
  const ScalarField H = compute_H(sol);
  const ScalarField omega = curl(sol.v, scheme);
  const double hmax = std::max(1.0, norm_linf(H));
  ScalarField Hn(sol.grid(), 1.0);
  for (int n = 0; n <= n_max; ++n) {
    MomentRow row;
    row.n = n;
    row.f_moment = std::abs(quadrature(sol.f * Hn));
    row.omega_moment = std::abs(quadrature(omega * Hn));
    row.bound = tol * std::pow(hmax, n);
    row.f_exempt = n == 0 && sol.alpha == 2.0;
    row.pass = row.omega_moment < row.bound && (row.f_exempt || row.f_moment < row.bound);
    rows.push_back(row);
    Hn = Hn * H;
  }
  return rows;
}

double landau_residual(const LandauProfile& profile, int n) {
  n = std::max(n, 1);
  double worst = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double x = std::cos(std::numbers::pi * k / n);
    const double psi = profile.psi(x);
    const double dpsi = profile.dpsi
                            ? profile.dpsi(x)
                            : boost::math::differentiation::finite_difference_derivative(
                                  profile.psi, x);
    const double lhs = psi * psi - 2.0 * profile.nu * (1.0 - x * x) * dpsi -
                       4.0 * profile.nu * x * psi;
    const double rhs = (profile.A * x + profile.B) * x + profile.C;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

LandauProfile landau_smooth(double nu, double c) {
  if (!(std::abs(c) > 1.0)) throw std::invalid_argument("smooth Landau branch needs |c| > 1");
  LandauProfile p;
  p.nu = nu;
  p.psi = [nu, c](double x) { return 2.0 * nu * (1.0 - x * x) / (c - x); };
  p.dpsi = [nu, c](double x) {
    const double d = c - x;
    return 2.0 * nu * ((1.0 - x * x) - 2.0 * x * d) / (d * d);
  };
  return p;
}

AxiStokesResult euler_axistokes(double A, double B, double C) {
  AxiStokesResult out;
  if (B * B <= 4.0 * A * C && C >= 0.0) {
    out.constraint_set = 1;
  } else if (std::abs(B) <= A + C && std::abs(B) >= 2.0 * A) {
    out.constraint_set = 2;
  }
  // nonnegativity on [-1, 1]
  const auto q = [A, B, C](double x) { return (A * x + B) * x + C; };
  double qmin = std::min(q(-1.0), q(1.0));
  if (A > 0.0 && std::abs(B) < 2.0 * A) qmin = std::min(qmin, q(-B / (2.0 * A)));
  out.feasible = out.constraint_set != 0 && qmin >= 0.0;
  if (!out.feasible) return out;
  out.smooth = A == 0.0 && B == 0.0 && C == 0.0;
  out.profile.A = A;
  out.profile.B = B;
  out.profile.C = C;
  out.profile.psi = [q](double x) { return std::sqrt(std::max(0.0, q(x))); };
  out.profile.dpsi = [q, A, B](double x) {
    const double s = std::sqrt(std::max(0.0, q(x)));
    return s > 0.0 ? (2.0 * A * x + B) / (2.0 * s) : 0.0;
  };
  return out;
}

StokesFields stokes_fields(const LandauProfile& profile, double phi) {
  const double x = std::cos(phi);
  const double dpsi = profile.dpsi
                          ? profile.dpsi(x)
                          : boost::math::differentiation::finite_difference_derivative(
                                profile.psi, x);
  return {-dpsi, -profile.psi(x) / std::sin(phi)};
}

std::vector<ViscosityRow> vanishing_viscosity_study(const std::vector<double>& nu_ladder,
                                                    double c) {
  if (!(std::abs(c) > 1.0)) throw std::invalid_argument("smooth Landau branch needs |c| > 1");
  std::vector<ViscosityRow> rows;
  for (double nu : nu_ladder) {
    const LandauProfile p = landau_smooth(nu, c);
    auto neg_abs = [&p](double x) { return -std::abs(p.psi(x)); };
    const auto [x_star, v_star] = boost::math::tools::brent_find_minima(neg_abs, -1.0, 1.0, 26);
    rows.push_back({nu, -v_star, landau_residual(p)});
  }
  return rows;
}

}  // namespace homog
