#pragma once

// Discrete calculus on the unit sphere.
//
// Fields live on a Gauss-Legendre (in cos(phi)) x uniform (in theta) grid
// with no node on either pole. Tangent fields are stored in the unit frame
// (e_phi, e_theta): w = a e_phi + b e_theta.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "homog/errors.hpp"

namespace homog {

class SphereGrid;
using GridPtr = std::shared_ptr<const SphereGrid>;

/// Gauss-Legendre x uniform-longitude grid. Immutable once built.
class SphereGrid {
 public:
  /// Throws std::invalid_argument unless nlat >= 4, nlon >= 4 and nlon is even.
  static GridPtr build(int nlat, int nlon);

  int nlat() const { return nlat_; }
  int nlon() const { return nlon_; }
  std::size_t size() const { return static_cast<std::size_t>(nlat_) * nlon_; }
  std::size_t index(int j, int k) const { return static_cast<std::size_t>(j) * nlon_ + k; }

  // Per-latitude data, phi strictly increasing.
  std::span<const double> phi_nodes() const { return phi_; }
  std::span<const double> cos_phi() const { return cos_phi_; }
  std::span<const double> sin_phi() const { return sin_phi_; }
  std::span<const double> gauss_weights() const { return gauss_w_; }
  std::span<const double> theta_nodes() const { return theta_; }

  /// Per-node quadrature weights; they sum to 4*pi.
  std::span<const double> weights() const { return weights_; }

  double phi(int j) const { return phi_[j]; }
  double theta(int k) const { return theta_[k]; }

  // Spectral machinery, shared read-only between threads.
  const std::vector<double>& x_diff_matrix() const { return diff_x_; }
  const std::vector<double>& legendre_table() const { return legendre_; }
  const std::vector<double>& cos_table() const { return cos_tab_; }
  const std::vector<double>& sin_table() const { return sin_tab_; }

  /// Highest degree / order resolved by the harmonic transform.
  int max_degree() const { return nlat_ - 1; }
  int max_order() const;

 private:
  SphereGrid(int nlat, int nlon);

  int nlat_;
  int nlon_;
  std::vector<double> phi_, cos_phi_, sin_phi_, gauss_w_, theta_, weights_;
  std::vector<double> diff_x_;    // nlat x nlat barycentric derivative in cos(phi)
  std::vector<double> legendre_;  // nlat x nlat, P_k(x_j) at [k * nlat + j]
  std::vector<double> cos_tab_;   // (nlon/2 + 1) x nlon, cos(m theta_k)
  std::vector<double> sin_tab_;
};

struct ScalarField {
  GridPtr grid;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(GridPtr g, std::vector<double> v);
  explicit ScalarField(GridPtr g, double fill = 0.0);

  double& operator()(int j, int k) { return values[grid->index(j, k)]; }
  double operator()(int j, int k) const { return values[grid->index(j, k)]; }
  std::size_t size() const { return values.size(); }
};

struct TangentField {
  GridPtr grid;
  std::vector<double> a;  // e_phi component
  std::vector<double> b;  // e_theta component

  TangentField() = default;
  TangentField(GridPtr g, std::vector<double> a_, std::vector<double> b_);
  explicit TangentField(GridPtr g);

  ScalarField a_field() const { return {grid, a}; }
  ScalarField b_field() const { return {grid, b}; }
};

enum class DerivativeScheme {
  Spectral,           // trigonometric in theta, parity-adapted polynomial in cos(phi)
  FiniteDifference4,  // fourth-order stencils in both directions
};

// Sampling and pointwise algebra.
ScalarField sample(const GridPtr& grid, const std::function<double(double phi, double theta)>& fn);
TangentField sample_tangent(const GridPtr& grid,
                            const std::function<double(double, double)>& a,
                            const std::function<double(double, double)>& b);

ScalarField operator+(const ScalarField& x, const ScalarField& y);
ScalarField operator-(const ScalarField& x, const ScalarField& y);
ScalarField operator*(const ScalarField& x, const ScalarField& y);
ScalarField operator*(double s, const ScalarField& x);
ScalarField operator-(const ScalarField& x);
TangentField operator+(const TangentField& x, const TangentField& y);
TangentField operator-(const TangentField& x, const TangentField& y);
TangentField operator*(double s, const TangentField& x);
TangentField operator*(const ScalarField& s, const TangentField& x);

ScalarField dot(const TangentField& u, const TangentField& v);
/// Normal component of u x v, i.e. u_a v_b - u_b v_a.
ScalarField cross_normal(const TangentField& u, const TangentField& v);
ScalarField map(const ScalarField& x, const std::function<double(double)>& fn);

double norm_linf(const ScalarField& s);
double norm_linf(const TangentField& w);
/// Quadrature-weighted L2 norm.
double norm_l2(const ScalarField& s);
double norm_l2(const TangentField& w);

// Calculus.
double quadrature(const ScalarField& s);

ScalarField d_phi(const ScalarField& s, DerivativeScheme scheme = DerivativeScheme::Spectral);
ScalarField d_theta(const ScalarField& s, DerivativeScheme scheme = DerivativeScheme::Spectral);

/// (d_phi s, d_theta s / sin(phi)).
TangentField grad(const ScalarField& s, DerivativeScheme scheme = DerivativeScheme::Spectral);
/// a_phi + a cot(phi) + b_theta / sin(phi).
ScalarField div(const TangentField& w, DerivativeScheme scheme = DerivativeScheme::Spectral);
/// b_phi + b cot(phi) - a_theta / sin(phi).
ScalarField curl(const TangentField& w, DerivativeScheme scheme = DerivativeScheme::Spectral);
/// Quarter turn about the outward normal: (a, b) -> (-b, a).
TangentField perp(const TangentField& w);
ScalarField laplace_beltrami(const ScalarField& s,
                             DerivativeScheme scheme = DerivativeScheme::Spectral);
/// w . grad s.
ScalarField advect(const TangentField& w, const ScalarField& s,
                   DerivativeScheme scheme = DerivativeScheme::Spectral);
/// Levi-Civita derivative of w along v, in the unit frame:
///   (a A_phi + b A_theta / sin - b B cot, a B_phi + b B_theta / sin + b A cot).
TangentField covariant_derivative(const TangentField& v, const TangentField& w,
                                  DerivativeScheme scheme = DerivativeScheme::Spectral);

// Spherical harmonics. Real form, unit L2 norm:
//   m > 0: sqrt(2) N P_l^m(cos phi) cos(m theta), m < 0: ... sin(|m| theta).
ScalarField sph_harmonic(int l, int m, const GridPtr& grid);

/// Coefficients c[l*l + l + m] for 0 <= l <= L, |m| <= min(l, max_order).
struct HarmonicCoefficients {
  int lmax = 0;
  std::vector<double> c;
  double& at(int l, int m) { return c[static_cast<std::size_t>(l * l + l + m)]; }
  double at(int l, int m) const { return c[static_cast<std::size_t>(l * l + l + m)]; }
};

HarmonicCoefficients sh_analysis(const ScalarField& s);
ScalarField sh_synthesis(const HarmonicCoefficients& coeffs, const GridPtr& grid);

/// Mean-zero solution of laplace_beltrami(s) = rhs. Throws SolvabilityError
/// if |mean(rhs)| >= 1e-8 * ||rhs||_inf.
ScalarField poisson_solve(const ScalarField& rhs);

struct HelmholtzResult {
  ScalarField solution;
  /// Largest |coefficient| of rhs on modes where -l(l+1) + shift vanishes.
  double resonant_residual = 0.0;
};
/// Solves (Delta + shift) s = rhs modewise; kernel modes of the operator are set to zero.
HelmholtzResult helmholtz_solve(const ScalarField& rhs, double shift);

}  // namespace homog
