#include "homog/axisym.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>

#include "homog/errors.hpp"
#include "homog/ode.hpp"

namespace homog {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

/// phi with t = -cos(phi), accurate near both poles.
double phi_of_t(double t) {
  if (t <= 0.0) return 2.0 * std::asin(std::sqrt(0.5 * (1.0 + t)));
  return std::numbers::pi - 2.0 * std::asin(std::sqrt(0.5 * (1.0 - t)));
}

/// The no-swirl system with phi as the independent variable.
ode::Rhs noswirl_phi_rhs(double al, double B) {
  return [al, B](double phi, const ode::State& y, ode::State& dy) {
    const double s = std::sin(phi);
    const double x = y[0];
    const double nl =
        B == 0.0 || x == 0.0 ? 0.0 : al * B * std::pow(std::abs(x), 4.0 / (al - 2.0)) * x;
    dy[0] = (al - 2.0) * y[1] * s;
    dy[1] = nl * s + (1.0 - al) * x / s;
  };
}

double relative_drift(const std::vector<double>& vals) {
  if (vals.empty()) return 0.0;
  const double ref = vals.front();
  double worst = 0.0;
  for (double v : vals) worst = std::max(worst, std::abs(v - ref));
  return ref != 0.0 ? worst / std::abs(ref) : worst;
}

}  // namespace

AxiDerivative axi_rhs(const AxiState& s, double a_floor) {
  if (std::abs(s.a) < a_floor) throw SingularRhsError("axisymmetric system needs a != 0");
  const double al = s.alpha;
  const double cot = std::cos(s.phi) / std::sin(s.phi);
  AxiDerivative d;
  d.a = -(2.0 - al) * s.f - s.a * cot;
  d.f = (s.a * s.a + s.b * s.b + al * s.f * s.f + 2.0 * al * s.p) / s.a;
  d.b = -((1.0 - al) * s.f * s.b + s.a * s.b * cot) / s.a;
  d.p = -((1.0 - al) * s.f * s.a + s.a * d.a - s.b * s.b * cot);
  return d;
}

double axi_bernoulli(const AxiState& s) { return s.a * s.a + s.b * s.b + s.f * s.f + 2.0 * s.p; }

double first_integral_A(const AxiState& s) {
  return std::pow(std::abs(s.b), 2.0 - s.alpha) * std::pow(std::abs(s.a), s.alpha - 1.0) *
         std::sin(s.phi);
}

double first_integral_B(const AxiState& s) {
  return std::pow(std::abs(axi_bernoulli(s)), 2.0 - s.alpha) *
         std::pow(std::abs(s.a * std::sin(s.phi)), 2.0 * s.alpha);
}

double axi_normal_residual(const AxiState& s, double f_prime) {
  const double al = s.alpha;
  return s.a * f_prime - (s.a * s.a + s.b * s.b + al * s.f * s.f + 2.0 * al * s.p);
}

AxiTrajectory integrate_axi(const AxiState& start, double phi_end, double tol) {
  const double al = start.alpha;
  const ode::Rhs rhs = [al](double phi, const ode::State& y, ode::State& dy) {
    const AxiState s{phi, y[0], y[1], y[2], y[3], al};
    if (std::abs(s.a) < 1e-14) {
      std::fill(dy.begin(), dy.end(), kNaN);
      return;
    }
    const AxiDerivative d = axi_rhs(s);
    dy[0] = d.f;
    dy[1] = d.a;
    dy[2] = d.b;
    dy[3] = d.p;
  };
  ode::Options opts;
  opts.abs_tol = 1e-3 * tol;
  opts.rel_tol = tol;
  opts.max_step = 0.5;
  const ode::Result res =
      ode::integrate(rhs, {start.f, start.a, start.b, start.p}, start.phi, phi_end, opts);
  AxiTrajectory out;
  out.alpha = al;
  out.blew_up = res.blew_up;
  for (std::size_t i = 0; i < res.t.size(); ++i) {
    const auto& y = res.y[i];
    if (!std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); })) break;
    out.states.push_back({res.t[i], y[0], y[1], y[2], y[3], al});
  }
  out.singular = res.blew_up && !out.states.empty() && std::abs(out.states.back().a) < 1e-8;
  return out;
}

DriftReport invariants_check(const AxiTrajectory& traj) {
  DriftReport rep;
  rep.a_applicable = !traj.states.empty();
  rep.b_applicable = !traj.states.empty();
  std::vector<double> ia, ib;
  for (const auto& s : traj.states) {
    if (s.a == 0.0 || s.b == 0.0) rep.a_applicable = false;
    if (s.a == 0.0 || axi_bernoulli(s) == 0.0) rep.b_applicable = false;
    ia.push_back(first_integral_A(s));
    ib.push_back(first_integral_B(s));
  }
  if (rep.a_applicable) rep.drift_A = relative_drift(ia);
  if (rep.b_applicable) rep.drift_B = relative_drift(ib);
  return rep;
}

PointValues explicit_const_p_point(double alpha, double phi0, double a0, double b0, double phi) {
  if (a0 == 0.0) {
    throw std::invalid_argument(b0 == 0.0 ? "explicit solution needs v0 != 0"
                                          : "explicit solution needs a0 != 0 when b0 != 0");
  }
  const double R = std::sin(phi) / std::sin(phi0);
  const double v2 = a0 * a0 + b0 * b0;
  const double W = v2 * R * R - b0 * b0;
  if (W <= 0.0) return {};
  const double scale = 1.0 / std::pow(std::abs(a0), 1.0 - alpha);
  PointValues pv;
  pv.a = sgn(a0) * scale / R * std::pow(W, 0.5 * (2.0 - alpha));
  pv.b = b0 * scale / R * std::pow(W, 0.5 * (1.0 - alpha));
  pv.f = -sgn(a0) * v2 * R * scale * std::cos(phi) / std::sin(phi) * std::pow(W, -0.5 * alpha);
  pv.p = 0.0;
  return pv;
}

HomogeneousSolution explicit_const_p(double alpha, double phi0, double a0, double b0,
                                     const GridPtr& grid) {
  explicit_const_p_point(alpha, phi0, a0, b0, phi0);
  AnalyticFields closure = [=](double phi, double) {
    return explicit_const_p_point(alpha, phi0, a0, b0, phi);
  };
  return sample_solution(alpha, FamilyTag::Conical,
                         "constant-pressure axisymmetric band; vanishes inside the cone",
                         {{"alpha", alpha}, {"phi0", phi0}, {"a0", a0}, {"b0", b0}},
                         std::move(closure), grid);
}

NoSwirlDerivative noswirl_rhs(const NoSwirlState& s) {
  if (std::abs(s.t) >= 1.0) throw std::domain_error("no-swirl system needs |t| < 1");
  const double al = s.alpha;
  NoSwirlDerivative d;
  d.x = (al - 2.0) * s.f;
  const double nl =
      s.B == 0.0 || s.x == 0.0 ? 0.0 : al * s.B * std::pow(std::abs(s.x), 4.0 / (al - 2.0)) * s.x;
  d.f = nl + (1.0 - al) * s.x / ((1.0 - s.t) * (1.0 + s.t));
  return d;
}

double noswirl_lyapunov(const NoSwirlState& s) {
  const double al = s.alpha;
  const double nl =
      s.B == 0.0 ? 0.0 : (2.0 - al) * s.B * std::pow(std::abs(s.x), 2.0 * al / (al - 2.0));
  return (2.0 - al) * s.f * s.f + (1.0 - al) * s.x * s.x / ((1.0 - s.t) * (1.0 + s.t)) - nl;
}

NoSwirlState noswirl_launch(double alpha, double B, double delta) {
  const double c = alpha - 2.0;
  const double mu = (alpha - 2.0) * (1.0 - alpha) / 2.0;
  NoSwirlState s;
  s.t = -1.0 + delta;
  s.alpha = alpha;
  s.B = B;
  s.x = c * (delta + mu * delta * delta / 2.0);
  s.f = c * (1.0 + mu * delta) / (alpha - 2.0);
  if (B != 0.0) {
    const double q = (alpha + 2.0) / (alpha - 2.0);
    s.f += alpha * B * sgn(c) * std::pow(std::abs(c), q) * std::pow(delta, q + 1.0) / (q + 1.0);
  }
  return s;
}

std::vector<NoSwirlState> integrate_noswirl(const NoSwirlState& start, double t_end, double tol) {
  const double al = start.alpha, B = start.B;
  ode::Options opts;
  opts.abs_tol = tol;
  opts.rel_tol = tol;
  opts.initial_step = 1e-6;
  opts.max_step = 0.02;
  const ode::Result res = ode::integrate(noswirl_phi_rhs(al, B), {start.x, start.f},
                                         phi_of_t(start.t), phi_of_t(t_end), opts);
  std::vector<NoSwirlState> out;
  for (std::size_t i = 0; i < res.t.size(); ++i) {
    out.push_back({-std::cos(res.t[i]), res.y[i][0], res.y[i][1], al, B});
  }
  if (res.blew_up) out.push_back({kNaN, kNaN, kNaN, al, B});
  return out;
}

ShootResult shoot_endpoint(double alpha, double B, double tol, double delta) {
  if (!(alpha < 1.0)) throw std::invalid_argument("shooting needs alpha < 1");
  ShootResult out;
  out.alpha = alpha;
  out.B = B;
  const NoSwirlState s0 = noswirl_launch(alpha, B, delta);
  if (!std::isfinite(s0.x) || !std::isfinite(s0.f)) {
    out.blew_up = true;
    out.defect = std::numeric_limits<double>::infinity();
    return out;
  }
  const ode::Rhs rhs = noswirl_phi_rhs(alpha, B);
  const double phi0 = 2.0 * std::asin(std::sqrt(0.5 * delta));
  const double phi1 = std::numbers::pi - phi0;
  const double phi2 = std::numbers::pi - 2.0 * std::asin(std::sqrt(0.25 * delta));
  ode::Options opts;
  opts.abs_tol = tol;
  opts.rel_tol = tol;
  opts.initial_step = 1e-6;
  opts.max_step = 0.02;
  opts.record = false;
  const ode::Result r1 = ode::integrate(rhs, {s0.x, s0.f}, phi0, phi1, opts);
  if (r1.blew_up) {
    out.blew_up = true;
    out.defect = std::numeric_limits<double>::infinity();
    return out;
  }
  const ode::Result r2 = ode::integrate(rhs, r1.final_state, phi1, phi2, opts);
  if (r2.blew_up) {
    out.blew_up = true;
    out.defect = std::numeric_limits<double>::infinity();
    return out;
  }
  out.x_end = r1.final_state[0];
  out.defect = 2.0 * r2.final_state[0] - r1.final_state[0];
  return out;
}

ScanResult scan_alpha(double alpha_lo, double alpha_hi, double B, int n_samples, double tol,
                      double threshold) {
  ScanResult out;
  if (n_samples <= 0 || alpha_hi < alpha_lo) return out;
  for (int i = 0; i < n_samples; ++i) {
    const double al =
        n_samples == 1 ? alpha_lo : alpha_lo + (alpha_hi - alpha_lo) * i / (n_samples - 1);
    const ShootResult r = shoot_endpoint(al, B, tol);
    out.rows.push_back({al, B, r.defect, r.blew_up, !r.blew_up && std::abs(r.defect) < threshold});
  }
  for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
    auto& lo = out.rows[i];
    auto& hi = out.rows[i + 1];
    if (lo.blew_up || hi.blew_up || lo.defect * hi.defect > 0.0) continue;
    lo.near_zero = true;
    hi.near_zero = true;
    if (lo.defect == 0.0) {
      out.zeros.push_back(lo.alpha);
      continue;
    }
    if (hi.defect == 0.0) continue;
    auto F = [&](double al) { return shoot_endpoint(al, B, tol).defect; };
    std::uintmax_t iters = 60;
    auto [a, b] = boost::math::tools::toms748_solve(F, lo.alpha, hi.alpha, lo.defect, hi.defect,
                                                    boost::math::tools::eps_tolerance<double>(40),
                                                    iters);
    out.zeros.push_back(0.5 * (a + b));
  }
  return out;
}

}  // namespace homog
