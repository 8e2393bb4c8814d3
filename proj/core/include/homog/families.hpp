#pragma once

// Explicit homogeneous solutions V = (v + f n) / |x|^alpha, P = p / |x|^(2 alpha),
// restricted to the unit sphere.

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "homog/sphere.hpp"

namespace homog {

enum class FamilyTag { Shear, Radial, Conical, Rotational, Irrotational, Lifted2D, TwoHalfD, Custom };

std::string to_string(FamilyTag tag);
/// Throws std::invalid_argument for unknown names.
FamilyTag family_tag_from_string(std::string_view name);

struct PointValues {
  double f = 0.0;
  double a = 0.0;
  double b = 0.0;
  double p = 0.0;
};

using AnalyticFields = std::function<PointValues(double phi, double theta)>;
using Params = std::map<std::string, double>;

struct HomogeneousSolution {
  double alpha = 0.0;
  ScalarField f;
  TangentField v;
  ScalarField p;
  FamilyTag family_tag = FamilyTag::Custom;
  std::string smooth_range_note;
  Params params;
  AnalyticFields closure;  // empty when the family has no pointwise formula

  const GridPtr& grid() const { return f.grid; }
};

/// Samples a pointwise formula onto a grid.
HomogeneousSolution sample_solution(double alpha, FamilyTag tag, std::string note, Params params,
                                    AnalyticFields closure, const GridPtr& grid);

/// Re-samples a solution with a closure on another grid.
HomogeneousSolution resample(const HomogeneousSolution& sol, const GridPtr& grid);

/// 2pi-periodic function of theta with its derivative.
struct PeriodicFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

/// Two-dimensional homogeneous solution: stream function Psi = r^(1-alpha) psi(theta).
struct Solution2D {
  double alpha = -1.0;
  std::function<double(double)> psi;
  std::function<double(double)> psi_prime;
  std::function<double(double)> psi_second;  // may be empty
  double p_const = 0.0;
  double bern = 0.0;  // conserved quantity B; +inf for the shear limit
  std::vector<double> zeros;  // zeros of psi in [0, 2pi), sorted
  std::string description;
};

// ---------------------------------------------------------------------------
// Constructors

/// V = (0, 0, z(theta) / r^alpha) with r the distance to the z-axis.
HomogeneousSolution parallel_shear(double alpha, const PeriodicFunction& z, const GridPtr& grid,
                                   Params params = {});

/// alpha = 2, f = c, v = 0, p = -c^2 / 2.
HomogeneousSolution radial(double c, const GridPtr& grid);

/// Axisymmetric geodesic flow with a vanishing cone; requires a0^2 + b0^2 = 1.
HomogeneousSolution conical_axisym(double alpha, double a0, double b0, const GridPtr& grid);

/// Tangential rotation b = amp sin^-alpha, p = -amp^2 / (2 alpha) sin^(-2 alpha); alpha != 0.
HomogeneousSolution rotational(double alpha, double amp, const GridPtr& grid);

/// f = amp Y_l^m, alpha = 1 - l, (1 - alpha) v = grad f.
HomogeneousSolution irrotational(int l, int m, double amp, const GridPtr& grid);

/// Spherical form of a 2D solution; the pressure is p_const / sin^(2 alpha).
HomogeneousSolution lift_2d(const Solution2D& sol2d, const GridPtr& grid);

/// 2D solution plus a passive third component z(theta) / r^alpha with
/// |psi|^alpha |z|^(1 - alpha) = const_c on each sign-definite piece of psi.
/// sign_profile gives the sign of z per piece (empty: alternating from +1).
HomogeneousSolution two_half_d(const Solution2D& sol2d, double const_c,
                               const std::vector<int>& sign_profile, const GridPtr& grid);

/// Third component profile used by two_half_d, exposed for checks.
PeriodicFunction two_half_d_profile(const Solution2D& sol2d, double const_c,
                                    const std::vector<int>& sign_profile);

}  // namespace homog
