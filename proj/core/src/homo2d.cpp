#include "homog/homo2d.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "homog/errors.hpp"
#include "homog/ode.hpp"

namespace homog {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLaunch = 1e-6;

double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

struct Coeffs {
  double w2;  // (1 - alpha)^2
  double c;   // alpha / (alpha - 1)
  double k;   // (alpha + 1) / (alpha - 1)
  double e;   // 2 alpha / (alpha - 1)
};

Coeffs coeffs(double alpha) {
  const double om = 1.0 - alpha;
  return {om * om, alpha / (alpha - 1.0), (alpha + 1.0) / (alpha - 1.0), 2.0 * alpha / (alpha - 1.0)};
}

double accel(const Coeffs& q, double B, double x) {
  const double forcing = B == 0.0 ? 0.0 : q.c * B * sgn(x) * std::pow(std::abs(x), q.k);
  return -q.w2 * x + forcing;
}

ode::Rhs rhs_2d(double alpha, double B) {
  const Coeffs q = coeffs(alpha);
  return [q, B](double, const ode::State& s, ode::State& d) {
    d[0] = s[1];
    d[1] = accel(q, B, s[0]);
  };
}

/// Positive arch at p = -1 launched from x = 0, y = sqrt(2).
struct Arch {
  double alpha = -1.0;
  double B = 0.0;
  double T = 0.0;
  std::shared_ptr<ode::DenseTrajectory> traj;

  // Regular expansion near the launching zero.
  std::pair<double, double> series(double t) const {
    const Coeffs q = coeffs(alpha);
    const double r2 = std::sqrt(2.0);
    const double nonlin = q.c * B * std::pow(r2, q.k);
    const double x = r2 * t + nonlin * std::pow(t, q.k + 2.0) / ((q.k + 1.0) * (q.k + 2.0)) -
                     q.w2 * r2 * t * t * t / 6.0;
    const double y = r2 + nonlin * std::pow(t, q.k + 1.0) / (q.k + 1.0) - q.w2 * r2 * t * t / 2.0;
    return {x, y};
  }

  // The arch is symmetric about its apex at T / 2: x(T - tau) = x(tau), y(T - tau) = -y(tau).
  std::pair<double, double> at(double tau) const {
    tau = std::clamp(tau, 0.0, T);
    const double sign = tau > 0.5 * T ? -1.0 : 1.0;
    if (tau > 0.5 * T) tau = T - tau;
    if (tau < kLaunch) {
      const auto [x, y] = series(tau);
      return {x, sign * y};
    }
    const ode::State s = (*traj)(std::min(tau, traj->t_end()));
    return {s[0], sign * s[1]};
  }
};

Arch build_arch(double alpha, double B, double tol, int max_windings) {
  if (alpha > -1.0) throw std::invalid_argument("time span needs alpha <= -1");
  Arch arch;
  arch.alpha = alpha;
  arch.B = B;
  const Coeffs q = coeffs(alpha);
  const double x0 = arch.series(kLaunch).first;
  const double y2 = 2.0 - q.w2 * x0 * x0 + (B == 0.0 ? 0.0 : B * std::pow(x0, q.e));
  if (!(y2 > 0.0)) throw IntegrationError("launch outside the hyperbolic branch");
  ode::Options opts;
  opts.abs_tol = tol;
  opts.rel_tol = tol;
  opts.initial_step = 1e-6;
  opts.max_step = 0.05;
  opts.blowup_cap = 1e150;
  const ode::Rhs rhs = rhs_2d(alpha, B);
  // Integrate to the apex, where y changes sign transversally; the return to
  // x = 0 can be nearly tangential for large B.
  ode::Event ev{[](double, const ode::State& s) { return s[1]; }, -1};
  ode::Result res = ode::integrate(rhs, {x0, std::sqrt(y2)}, kLaunch,
                                   kPi * max_windings, opts, ev);
  if (res.blew_up) throw IntegrationError("arch integration blew up");
  if (!res.event_hit || !(res.final_state[0] > 0.0)) {
    throw IntegrationError("arch did not return to zero");
  }
  arch.T = 2.0 * res.final_t;
  arch.traj = std::make_shared<ode::DenseTrajectory>(rhs, std::move(res));
  return arch;
}

Solution2D shear_profile(double alpha) {
  Solution2D s;
  s.alpha = alpha;
  const double om = 1.0 - alpha;
  s.psi = [alpha](double t) {
    const double v = std::sin(t);
    return sgn(v) * std::pow(std::abs(v), 1.0 - alpha);
  };
  s.psi_prime = [alpha, om](double t) {
    return om * std::cos(t) * std::pow(std::abs(std::sin(t)), -alpha);
  };
  s.psi_second = [alpha, om](double t) {
    const double v = std::sin(t), c = std::cos(t);
    const double a = std::abs(v);
    if (a == 0.0) return 0.0;
    return om * sgn(v) * std::pow(a, -alpha - 1.0) * (-alpha * c * c - v * v);
  };
  s.p_const = 0.0;
  s.bern = om * om;
  s.zeros = {0.0, kPi};
  s.description = "parallel shear profile";
  return s;
}

}  // namespace

double bernoulli_2d(double x, double y, double alpha, double p_const) {
  const double om = 1.0 - alpha;
  const double e = 2.0 * alpha / om;
  const double base = 2.0 * p_const + om * om * x * x + y * y;
  if (x == 0.0) {
    if (e < 0.0) return std::numeric_limits<double>::infinity();
    return e == 0.0 ? base : 0.0;
  }
  return base * std::pow(std::abs(x), e);
}

double hamiltonian_2d(double x, double y, double alpha, double B) {
  const Coeffs q = coeffs(alpha);
  const double nl = B == 0.0 ? 0.0 : 0.5 * B * std::pow(std::abs(x), q.e);
  return -0.5 * y * y - 0.5 * q.w2 * x * x + nl;
}

Orbit2D integrate_orbit(const Phase2D& start, double theta_span, double tol, bool stop_at_zero) {
  ode::Options opts;
  opts.abs_tol = tol;
  opts.rel_tol = tol;
  opts.max_step = 0.05;
  std::optional<ode::Event> ev;
  if (stop_at_zero) ev = ode::Event{[](double, const ode::State& s) { return s[0]; }, 0};
  const ode::Result res = ode::integrate(rhs_2d(start.alpha, start.bern), {start.x, start.y},
                                         start.theta, start.theta + theta_span, opts, ev);
  Orbit2D out;
  out.hit_zero = res.event_hit;
  out.blew_up = res.blew_up;
  const double h0 = hamiltonian_2d(start.x, start.y, start.alpha, start.bern);
  for (std::size_t i = 0; i < res.t.size(); ++i) {
    out.theta.push_back(res.t[i]);
    out.x.push_back(res.y[i][0]);
    out.y.push_back(res.y[i][1]);
    out.hamiltonian_drift = std::max(
        out.hamiltonian_drift,
        std::abs(hamiltonian_2d(res.y[i][0], res.y[i][1], start.alpha, start.bern) - h0));
  }
  return out;
}

double time_span(double alpha, double B, double tol, int max_windings) {
  if (alpha > -1.0) throw std::invalid_argument("time span needs alpha <= -1");
  if (std::isinf(B) && B > 0) return kPi;
  return build_arch(alpha, B, tol, max_windings).T;
}

std::vector<SpanRow> time_span_table(double alpha, const std::vector<double>& B_values,
                                     double tol) {
  std::vector<SpanRow> rows;
  rows.reserve(B_values.size());
  for (double B : B_values) rows.push_back({B, time_span(alpha, B, tol)});
  return rows;
}

std::optional<GluedProfile> glue_hyperbolic(double alpha, const std::vector<double>& B_list,
                                            double polish_window) {
  if (B_list.empty() || B_list.size() % 2 != 0) return std::nullopt;
  const auto n_inf = std::count_if(B_list.begin(), B_list.end(),
                                   [](double B) { return std::isinf(B) && B > 0; });
  if (n_inf == static_cast<long>(B_list.size())) {
    if (B_list.size() != 2) return std::nullopt;
    return GluedProfile{shear_profile(alpha), B_list, {kPi, kPi}};
  }
  if (n_inf != 0) return std::nullopt;

  const double tol = 1e-13;
  std::vector<Arch> arches;
  double total = 0.0;
  for (double B : B_list) {
    arches.push_back(build_arch(alpha, B, tol, 8));
    total += arches.back().T;
  }
  const double gap = 2.0 * kPi - total;
  if (std::abs(gap) > polish_window) return std::nullopt;
  if (std::abs(gap) > 1e-12) {
    const double target = arches.back().T + gap;
    if (!(target > 0.0 && target < kPi)) return std::nullopt;
    auto F = [&](double B) { return build_arch(alpha, B, tol, 8).T - target; };
    double lo = arches.back().B, hi = lo;
    double step = std::max(1.0, std::abs(lo));
    double flo = F(lo), fhi = flo;
    for (int it = 0; it < 60 && flo * fhi > 0.0; ++it) {
      if (flo > 0.0) {
        hi = lo;
        fhi = flo;
        lo -= step;
        flo = F(lo);
      } else {
        lo = hi;
        flo = fhi;
        hi += step;
        fhi = F(hi);
      }
      step *= 2.0;
    }
    if (flo * fhi > 0.0) return std::nullopt;
    std::uintmax_t iters = 100;
    auto [a, b] = boost::math::tools::toms748_solve(F, lo, hi, flo, fhi,
                                                    boost::math::tools::eps_tolerance<double>(48),
                                                    iters);
    arches.back() = build_arch(alpha, 0.5 * (a + b), tol, 8);
  }

  auto shared = std::make_shared<std::vector<Arch>>(std::move(arches));
  std::vector<double> starts;
  double acc = 0.0;
  GluedProfile out;
  for (const auto& a : *shared) {
    starts.push_back(acc);
    acc += a.T;
    out.B.push_back(a.B);
    out.T.push_back(a.T);
  }
  auto locate = [shared, starts](double theta) {
    double t = std::fmod(theta, 2.0 * kPi);
    if (t < 0) t += 2.0 * kPi;
    std::size_t i = static_cast<std::size_t>(std::upper_bound(starts.begin(), starts.end(), t) -
                                             starts.begin()) - 1;
    const double sign = i % 2 == 0 ? 1.0 : -1.0;
    return std::tuple<std::size_t, double, double>{i, t - starts[i], sign};
  };
  Solution2D& s = out.solution;
  s.alpha = alpha;
  s.psi = [shared, locate](double theta) {
    auto [i, tau, sign] = locate(theta);
    return sign * (*shared)[i].at(tau).first;
  };
  s.psi_prime = [shared, locate](double theta) {
    auto [i, tau, sign] = locate(theta);
    return sign * (*shared)[i].at(tau).second;
  };
  s.psi_second = [shared, locate, alpha](double theta) {
    auto [i, tau, sign] = locate(theta);
    const Arch& a = (*shared)[i];
    return sign * accel(coeffs(alpha), a.B, a.at(tau).first);
  };
  s.p_const = -1.0;
  const bool same = std::all_of(out.B.begin(), out.B.end(), [&](double B) { return B == out.B[0]; });
  s.bern = same ? out.B[0] : std::numeric_limits<double>::quiet_NaN();
  s.zeros = starts;
  s.description = "glued hyperbolic profile";
  return out;
}

EllipticCount count_elliptic(double alpha) {
  if (alpha > -1.0) throw std::invalid_argument("elliptic classification needs alpha <= -1");
  EllipticCount out;
  if (alpha == -1.0) {
    out.exceptional = true;
    return out;
  }
  if (alpha >= -3.5) return out;
  const double upper = std::sqrt(2.0 * (1.0 - alpha));
  for (int n = 3; n < upper; ++n) ++out.count;
  return out;
}

double p_max(double alpha) {
  const double am1 = alpha - 1.0;
  return 1.0 / (2.0 * (1.0 - alpha)) * std::pow(alpha / (am1 * am1 * am1), -alpha);
}

double equilibrium_x(double alpha, double B) {
  const Coeffs q = coeffs(alpha);
  return std::pow(q.c * B / q.w2, 1.0 / (1.0 - q.k));
}

Solution2D elliptic_exceptional(double g1, double g2) {
  if (!(g1 > std::abs(g2))) throw std::invalid_argument("elliptic profile needs g1 > |g2|");
  Solution2D s;
  s.alpha = -1.0;
  s.psi = [g1, g2](double t) { return g1 + g2 * std::cos(2.0 * t); };
  s.psi_prime = [g2](double t) { return -2.0 * g2 * std::sin(2.0 * t); };
  s.psi_second = [g2](double t) { return -4.0 * g2 * std::cos(2.0 * t); };
  s.p_const = 2.0 * (g1 * g1 - g2 * g2);
  s.bern = bernoulli_2d(g1 + g2, 0.0, -1.0, s.p_const);
  s.description = "elliptic profile with ellipse streamlines";
  return s;
}

double ode2d_residual(const Solution2D& sol, int samples) {
  if (!sol.psi_second) throw std::invalid_argument("profile has no second derivative");
  const double al = sol.alpha, om = 1.0 - al;
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = 2.0 * kPi * (i + 0.5) / samples;
    const double q = sol.psi(t), dq = sol.psi_prime(t), d2q = sol.psi_second(t);
    worst = std::max(worst, std::abs(2.0 * al * sol.p_const + al * dq * dq + om * om * q * q +
                                     om * d2q * q));
  }
  return worst;
}

double bernoulli_spread(const Solution2D& sol, int samples) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < samples; ++i) {
    const double t = 2.0 * kPi * (i + 0.5) / samples;
    const double q = sol.psi(t);
    if (std::abs(q) < 1e-8) continue;
    const double b = bernoulli_2d(q, sol.psi_prime(t), sol.alpha, sol.p_const);
    lo = std::min(lo, b);
    hi = std::max(hi, b);
  }
  return hi >= lo ? hi - lo : 0.0;
}

}  // namespace homog
