#pragma once

// Adaptive Dormand-Prince 5(4) integration with zero-crossing events.
//
// Step control bounds the local error per unit step, so the global error
// scales linearly with the requested tolerance.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace homog::ode {

using State = std::vector<double>;
using Rhs = std::function<void(double t, const State& y, State& dydt)>;

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double initial_step = 1e-3;
  double max_step = 0.0;  // 0: unbounded
  std::size_t max_steps = 2'000'000;
  double blowup_cap = 1e12;
  bool record = true;  // keep every accepted step
};

struct Event {
  std::function<double(double t, const State& y)> g;
  int direction = 0;  // +1 rising, -1 falling, 0 either
};

struct Result {
  std::vector<double> t;
  std::vector<State> y;
  State final_state;
  double final_t = 0.0;
  bool event_hit = false;
  bool blew_up = false;
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t forced = 0;  // steps accepted at the minimum size despite the error test
};

/// Integrates from t0 towards t1 (either direction). Stops at the first
/// event crossing, located to rounding accuracy, or when the state blows up.
Result integrate(const Rhs& rhs, State y0, double t0, double t1, const Options& opts,
                 const std::optional<Event>& event = std::nullopt);

/// One fixed Dormand-Prince step of size h.
State step(const Rhs& rhs, const State& y, double t, double h);

/// Values of a recorded trajectory at arbitrary times, via one short step
/// from the nearest recorded node at or before t.
class DenseTrajectory {
 public:
  DenseTrajectory() = default;
  DenseTrajectory(Rhs rhs, Result result);
  State operator()(double t) const;
  double t_begin() const { return ts_.front(); }
  double t_end() const { return ts_.back(); }

 private:
  Rhs rhs_;
  std::vector<double> ts_;
  std::vector<State> ys_;
};

}  // namespace homog::ode
