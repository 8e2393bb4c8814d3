#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "homog/sphere.hpp"

namespace homog::testing {

inline constexpr double kPi = std::numbers::pi;

inline double max_abs_diff(const ScalarField& x, const std::function<double(double, double)>& fn) {
  double m = 0.0;
  const auto& g = *x.grid;
  for (int j = 0; j < g.nlat(); ++j) {
    for (int k = 0; k < g.nlon(); ++k) {
      m = std::max(m, std::abs(x(j, k) - fn(g.phi(j), g.theta(k))));
    }
  }
  return m;
}

inline double max_abs_diff(const ScalarField& x, const ScalarField& y) {
  return norm_linf(x - y);
}

/// Random combination of harmonics up to degree lmax.
inline ScalarField random_bandlimited(const GridPtr& grid, int lmax, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  HarmonicCoefficients c;
  c.lmax = lmax;
  c.c.assign(static_cast<std::size_t>((lmax + 1) * (lmax + 1)), 0.0);
  for (int l = 0; l <= lmax; ++l) {
    for (int m = -l; m <= l; ++m) c.at(l, m) = nd(rng) / (1.0 + l);
  }
  return sh_synthesis(c, grid);
}

}  // namespace homog::testing
