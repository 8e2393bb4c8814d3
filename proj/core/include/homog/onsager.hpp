#pragma once

// Stream-field construction, the energy-flux functional and its moment
// identities, and the Landau profiles of the axisymmetric alpha = 1 problem.

#include <functional>
#include <vector>

#include "homog/families.hpp"
#include "homog/sphere.hpp"

namespace homog {

/// Psi = |x|^(1 - alpha) (psi + h n) with curl Psi = V and div Psi = 0.
struct StreamField {
  TangentField psi;
  ScalarField h;
  double alpha = 0.0;
  /// Largest harmonic coefficient of the gauge right-hand side on the kernel
  /// of Delta + (3 - alpha)(2 - alpha); nonzero values leave the divergence
  /// condition violated by that amount.
  double resonant_residual = 0.0;
};

struct GaugeResidual {
  double reconstruction = 0.0;  // |v - (2 - alpha) psi^perp + grad^perp h|
  double curl = 0.0;            // |curl psi - f|
  double divergence = 0.0;      // |(3 - alpha) h + div psi|
  double max() const;
};

/// Throws std::invalid_argument for alpha = 2 and SolvabilityError when f has nonzero mean.
StreamField build_stream_field(const HomogeneousSolution& sol,
                               DerivativeScheme scheme = DerivativeScheme::Spectral);

GaugeResidual gauge_residual(const StreamField& sf, const HomogeneousSolution& sol,
                             DerivativeScheme scheme = DerivativeScheme::Spectral);

/// psi + grad(phi) with the compensating h + (2 - alpha) phi.
StreamField shift_gauge(const StreamField& sf, const ScalarField& phi,
                        DerivativeScheme scheme = DerivativeScheme::Spectral);

/// -1/2 integral of f H over the sphere.
double flux(const HomogeneousSolution& sol);

struct MomentRow {
  int n = 0;
  double f_moment = 0.0;      // |integral f H^n|
  double omega_moment = 0.0;  // |integral omega H^n|
  double bound = 0.0;         // tol * max(1, |H|_inf)^n
  bool f_exempt = false;      // n = 0 at alpha = 2
  bool pass = false;
};

std::vector<MomentRow> moment_identities(const HomogeneousSolution& sol, int n_max, double tol,
                                         DerivativeScheme scheme = DerivativeScheme::Spectral);

struct LandauProfile {
  double nu = 0.0;
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  std::function<double(double)> psi;   // x = cos(phi) in [-1, 1]
  std::function<double(double)> dpsi;  // d psi / dx; empty means differentiate numerically
};

/// max |psi^2 - 2 nu (1 - x^2) psi' - 4 nu x psi - (A x^2 + B x + C)| on n + 1
/// Chebyshev-Lobatto points.
double landau_residual(const LandauProfile& profile, int n = 64);

/// Smooth branch psi = 2 nu (1 - x^2) / (c - x), |c| > 1, with A = B = C = 0.
LandauProfile landau_smooth(double nu, double c);

struct AxiStokesResult {
  bool feasible = false;
  int constraint_set = 0;  // 1: B^2 <= 4AC, C >= 0; 2: |B| <= A + C, |B| >= 2A
  bool smooth = false;     // only A = B = C = 0
  LandauProfile profile;
};

/// Inviscid profile psi = sqrt(A x^2 + B x + C).
AxiStokesResult euler_axistokes(double A, double B, double C);

/// f = psi_phi / sin(phi) = -psi_x(cos phi), a = -psi / sin(phi).
struct StokesFields {
  double f = 0.0;
  double a = 0.0;
};
StokesFields stokes_fields(const LandauProfile& profile, double phi);

struct ViscosityRow {
  double nu = 0.0;
  double sup_psi = 0.0;
  double residual = 0.0;
};

/// Throws std::invalid_argument unless |c| > 1.
std::vector<ViscosityRow> vanishing_viscosity_study(const std::vector<double>& nu_ladder,
                                                    double c);

}  // namespace homog
