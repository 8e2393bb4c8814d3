#include "homog/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace homog {

double ResidualReport::max_linf() const {
  double m = 0.0;
  for (const auto& e : equations) m = std::max(m, e.linf);
  return m;
}

const ResidualEntry* ResidualReport::find(const std::string& name) const {
  for (const auto& e : equations) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

void ResidualReport::add(std::string name, const ScalarField& r) {
  equations.push_back({std::move(name), norm_linf(r), norm_l2(r)});
  if (r.grid) {
    nlat = r.grid->nlat();
    nlon = r.grid->nlon();
  }
}

void ResidualReport::finalize(double tolerance) {
  tol = tolerance;
  pass = std::all_of(equations.begin(), equations.end(), [&](const ResidualEntry& e) {
    return std::isfinite(e.linf) && e.linf < tolerance;
  });
}

void ResidualReport::merge(const ResidualReport& other) {
  equations.insert(equations.end(), other.equations.begin(), other.equations.end());
  if (nlat == 0) {
    nlat = other.nlat;
    nlon = other.nlon;
  }
  finalize(tol > 0.0 ? tol : other.tol);
}

ScalarField compute_H(const HomogeneousSolution& sol) {
  return dot(sol.v, sol.v) + sol.f * sol.f + 2.0 * sol.p;
}

VorticityParts compute_vorticity_parts(const HomogeneousSolution& sol, DerivativeScheme scheme) {
  VorticityParts out;
  out.omega = curl(sol.v, scheme);
  out.u = (1.0 - sol.alpha) * perp(sol.v) - perp(grad(sol.f, scheme));
  out.compatibility = norm_linf((1.0 - sol.alpha) * out.omega + div(out.u, scheme));
  return out;
}

ResidualReport check_system(const HomogeneousSolution& sol, double tol, DerivativeScheme scheme) {
  const double al = sol.alpha;
  const auto& grid = sol.grid();
  const auto& f = sol.f;
  const auto& v = sol.v;
  ResidualReport rep;

  rep.add("continuity", (2.0 - al) * f + div(v, scheme));
  rep.add("normal", advect(v, f, scheme) - dot(v, v) - al * (f * f) - (2.0 * al) * sol.p);

  const TangentField mom = (1.0 - al) * (f * v) + covariant_derivative(v, v, scheme) +
                           grad(sol.p, scheme);
  rep.add("momentum_phi", mom.a_field());
  rep.add("momentum_theta", mom.b_field());

  // Literal coordinate form, each row multiplied through by sin(phi).
  const ScalarField A = v.a_field();
  const ScalarField B = v.b_field();
  const ScalarField s = sample(grid, [](double phi, double) { return std::sin(phi); });
  const ScalarField c = sample(grid, [](double phi, double) { return std::cos(phi); });
  const ScalarField row3 = (1.0 - al) * (f * A * s) + A * d_phi(A, scheme) * s +
                           B * d_theta(A, scheme) - B * B * c + d_phi(sol.p, scheme) * s;
  const ScalarField row4 = (1.0 - al) * (f * B * s) + A * d_phi(B, scheme) * s +
                           B * d_theta(B, scheme) + A * B * c + d_theta(sol.p, scheme);
  rep.add("coordinate_phi", row3);
  rep.add("coordinate_theta", row4);
  rep.add("form_agreement", map(row3 - s * mom.a_field(), [](double x) { return std::abs(x); }) +
                                map(row4 - s * mom.b_field(), [](double x) { return std::abs(x); }));
  rep.finalize(tol);
  return rep;
}

ResidualReport check_bernoulli_transport(const HomogeneousSolution& sol, double tol,
                                         DerivativeScheme scheme) {
  const ScalarField H = compute_H(sol);
  ResidualReport rep;
  rep.add("bernoulli_transport", advect(sol.v, H, scheme) - (2.0 * sol.alpha) * (sol.f * H));
  rep.finalize(tol);
  return rep;
}

ResidualReport check_vorticity_system(const HomogeneousSolution& sol, double tol,
                                      DerivativeScheme scheme) {
  const ScalarField H = compute_H(sol);
  const VorticityParts vp = compute_vorticity_parts(sol, scheme);
  ResidualReport rep;
  rep.add("vorticity_normal", cross_normal(vp.u, sol.v) - sol.alpha * H);
  const TangentField t = sol.f * vp.u - vp.omega * sol.v + 0.5 * perp(grad(H, scheme));
  rep.add("vorticity_tangent_phi", t.a_field());
  rep.add("vorticity_tangent_theta", t.b_field());
  rep.add("vorticity_compatibility",
          (1.0 - sol.alpha) * vp.omega + div(vp.u, scheme));
  rep.finalize(tol);
  return rep;
}

ResidualReport check_lie_bracket(const HomogeneousSolution& sol, double tol,
                                 DerivativeScheme scheme) {
  const double al = sol.alpha;
  const VorticityParts vp = compute_vorticity_parts(sol, scheme);
  const TangentField lhs =
      covariant_derivative(vp.u, sol.v, scheme) - covariant_derivative(sol.v, vp.u, scheme);
  const TangentField r = lhs - (1.0 + al) * (vp.omega * sol.v) + (2.0 + al) * (sol.f * vp.u);
  ResidualReport rep;
  rep.add("lie_tangent_phi", r.a_field());
  rep.add("lie_tangent_theta", r.b_field());
  rep.add("lie_normal", advect(sol.v, vp.omega, scheme) - advect(vp.u, sol.f, scheme) -
                            sol.f * vp.omega);
  rep.finalize(tol);
  return rep;
}

ScalarField geodesic_defect(const HomogeneousSolution& sol, DerivativeScheme scheme) {
  const double al = sol.alpha;
  const TangentField dt = (1.0 - al) * (sol.f * sol.v) + covariant_derivative(sol.v, sol.v, scheme);
  const ScalarField dn =
      advect(sol.v, sol.f, scheme) - dot(sol.v, sol.v) - al * (sol.f * sol.f);
  ScalarField out(sol.grid(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double d1 = dt.a[i], d2 = dt.b[i], d3 = dn.values[i];
    const double v1 = sol.v.a[i], v2 = sol.v.b[i], v3 = sol.f.values[i];
    const double c1 = d2 * v3 - d3 * v2;
    const double c2 = d3 * v1 - d1 * v3;
    const double c3 = d1 * v2 - d2 * v1;
    out.values[i] = std::sqrt(c1 * c1 + c2 * c2 + c3 * c3);
  }
  return out;
}

SignCheck sign_check_H(const HomogeneousSolution& sol, double tol) {
  SignCheck out;
  out.applicable = sol.alpha > 0.0 && sol.alpha < 1.0;
  if (!out.applicable) return out;
  const ScalarField H = compute_H(sol);
  out.max_H = *std::max_element(H.values.begin(), H.values.end());
  out.system_residual = check_system(sol, tol).max_linf();
  out.contradiction = out.max_H > tol && out.system_residual < tol;
  return out;
}


double PointResidual::max_abs() const {
  return std::max({std::abs(continuity), std::abs(normal), std::abs(momentum_phi),
                   std::abs(momentum_theta)});
}

PointResidual closure_residual(const HomogeneousSolution& sol, double phi, double theta,
                               double h) {
  if (!sol.closure) throw std::invalid_argument("solution has no closure");
  const auto& F = sol.closure;
  auto diff = [&](bool in_phi) {
    PointValues d;
    constexpr double w[3] = {45.0, -9.0, 1.0};
    for (int i = 1; i <= 3; ++i) {
      const double s = i * h;
      const PointValues up = in_phi ? F(phi + s, theta) : F(phi, theta + s);
      const PointValues dn = in_phi ? F(phi - s, theta) : F(phi, theta - s);
      d.f += w[i - 1] * (up.f - dn.f);
      d.a += w[i - 1] * (up.a - dn.a);
      d.b += w[i - 1] * (up.b - dn.b);
      d.p += w[i - 1] * (up.p - dn.p);
    }
    const double scale = 1.0 / (60.0 * h);
    d.f *= scale;
    d.a *= scale;
    d.b *= scale;
    d.p *= scale;
    return d;
  };
  const PointValues q = F(phi, theta);
  const PointValues dp = diff(true);
  const PointValues dt = diff(false);
  const double al = sol.alpha;
  const double s = std::sin(phi), ct = std::cos(phi) / s;
  const double v2 = q.a * q.a + q.b * q.b;

  PointResidual r;
  r.continuity = (2.0 - al) * q.f + dp.a + q.a * ct + dt.b / s;
  const double vf = q.a * dp.f + q.b * dt.f / s;
  r.normal = vf - v2 - al * q.f * q.f - 2.0 * al * q.p;
  const double cov_a = q.a * dp.a + q.b * dt.a / s - q.b * q.b * ct;
  const double cov_b = q.a * dp.b + q.b * dt.b / s + q.b * q.a * ct;
  const double ta = (1.0 - al) * q.f * q.a + cov_a;
  const double tb = (1.0 - al) * q.f * q.b + cov_b;
  r.momentum_phi = ta + dp.p;
  r.momentum_theta = tb + dt.p / s;
  const double dn = vf - v2 - al * q.f * q.f;
  const double c1 = tb * q.f - dn * q.b;
  const double c2 = dn * q.a - ta * q.f;
  const double c3 = ta * q.b - tb * q.a;
  r.geodesic = std::sqrt(c1 * c1 + c2 * c2 + c3 * c3);
  return r;
}

}  // namespace homog
