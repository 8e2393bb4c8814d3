#include "homog/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>

#include "homog/errors.hpp"

namespace homog::ode {

namespace {

using Stepper = boost::numeric::odeint::runge_kutta_dopri5<State>;

struct SystemAdapter {
  const Rhs* rhs;
  void operator()(const State& y, State& dydt, double t) const { (*rhs)(t, y, dydt); }
};

bool finite_and_bounded(const State& y, double cap) {
  return std::all_of(y.begin(), y.end(),
                     [cap](double v) { return std::isfinite(v) && std::abs(v) <= cap; });
}

}  // namespace

State step(const Rhs& rhs, const State& y, double t, double h) {
  Stepper stepper;
  State out(y.size());
  State err(y.size());
  stepper.do_step(SystemAdapter{&rhs}, y, t, out, h, err);
  return out;
}

Result integrate(const Rhs& rhs, State y0, double t0, double t1, const Options& opts,
                 const std::optional<Event>& event) {
  Result res;
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  double h = std::min(opts.initial_step, span > 0 ? span : opts.initial_step);
  double t = t0;
  State y = std::move(y0);
  if (opts.record) {
    res.t.push_back(t);
    res.y.push_back(y);
  }
  Stepper stepper;
  const SystemAdapter sys{&rhs};
  State y_new(y.size());
  State err(y.size());
  State dydt(y.size());
  State dydt_new(y.size());
  rhs(t, y, dydt);
  double g_prev = event ? event->g(t, y) : 0.0;
  double e_prev = 1e-4;

  while (dir * (t1 - t) > 0.0) {
    if (res.steps + res.rejected >= opts.max_steps) {
      throw IntegrationError("integration exceeded the step budget");
    }
    if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
    const bool last = h >= std::abs(t1 - t);
    const double hs = last ? (t1 - t) : dir * h;
    stepper.do_step(sys, y, dydt, t, y_new, dydt_new, hs, err);

    double e = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double scale =
          opts.abs_tol +
          opts.rel_tol * std::max({std::abs(y[i]), std::abs(y_new[i]), std::abs(dydt[i])});
      e = std::max(e, std::abs(err[i]) / (std::abs(hs) * scale));
    }
    if (!std::isfinite(e)) e = 1e10;
    const double h_min = 1e-14 * std::max(1.0, std::abs(t));
    if (e > 1.0 && std::abs(hs) > h_min) {
      ++res.rejected;
      h = std::max(h_min, std::abs(hs) * std::max(0.2, 0.9 * std::pow(e, -0.2)));
      continue;
    }
    if (e > 1.0) ++res.forced;
    ++res.steps;
    const double t_new = last ? t1 : t + hs;

    if (event) {
      const double g_new = event->g(t_new, y_new);
      const bool crossed = (g_prev < 0.0 && g_new >= 0.0 && event->direction >= 0) ||
                           (g_prev > 0.0 && g_new <= 0.0 && event->direction <= 0);
      if (crossed) {
        const State y_start = y;
        const double t_start = t;
        Options sub = opts;
        sub.record = false;
        sub.initial_step = std::abs(hs) / 8.0;
        auto advance = [&](double tau) {
          if (tau == 0.0) return y_start;
          return integrate(rhs, y_start, t_start, t_start + tau, sub).final_state;
        };
        auto G = [&](double tau) { return event->g(t_start + tau, advance(tau)); };
        double tau;
        if (g_new == 0.0 || t_new == t_start) {
          tau = t_new - t_start;
        } else {
          std::uintmax_t iters = 200;
          const double lo = std::min(0.0, t_new - t_start);
          const double hi = std::max(0.0, t_new - t_start);
          auto [a, b] = boost::math::tools::toms748_solve(
              G, lo, hi, lo == 0.0 ? g_prev : g_new, hi == 0.0 ? g_prev : g_new,
              boost::math::tools::eps_tolerance<double>(52), iters);
          tau = 0.5 * (a + b);
        }
        res.event_hit = true;
        t = t_start + tau;
        y = advance(tau);
        if (opts.record) {
          res.t.push_back(t);
          res.y.push_back(y);
        }
        break;
      }
      g_prev = g_new;
    }

    t = t_new;
    y.swap(y_new);
    dydt.swap(dydt_new);
    if (opts.record) {
      res.t.push_back(t);
      res.y.push_back(y);
    }
    if (!finite_and_bounded(y, opts.blowup_cap)) {
      res.blew_up = true;
      break;
    }
    const double ec = std::max(e, 1e-30);
    h = std::max(h_min, std::abs(hs) * std::clamp(0.9 * std::pow(ec, -0.17) * std::pow(e_prev, 0.04),
                                                   0.2, 5.0));
    e_prev = std::max(ec, 1e-4);
  }
  res.final_t = t;
  res.final_state = y;
  return res;
}

DenseTrajectory::DenseTrajectory(Rhs rhs, Result result)
    : rhs_(std::move(rhs)), ts_(std::move(result.t)), ys_(std::move(result.y)) {
  if (ts_.empty()) throw std::invalid_argument("dense trajectory needs recorded steps");
  if (ts_.size() > 1 && ts_.back() < ts_.front()) {
    std::reverse(ts_.begin(), ts_.end());
    std::reverse(ys_.begin(), ys_.end());
  }
}

State DenseTrajectory::operator()(double t) const {
  auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
  std::size_t i = it == ts_.begin() ? 0 : static_cast<std::size_t>(it - ts_.begin()) - 1;
  if (i + 1 >= ts_.size() && i > 0) i = ts_.size() - 1;
  const double h = t - ts_[i];
  if (h == 0.0) return ys_[i];
  return step(rhs_, ys_[i], ts_[i], h);
}

}  // namespace homog::ode
