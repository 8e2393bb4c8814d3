#pragma once

// Residuals of the reduced Euler system on the sphere and of its equivalent
// formulations, plus derived quantities (H, vorticity parts, geodesic defect).

#include <optional>
#include <string>
#include <vector>

#include "homog/families.hpp"

namespace homog {

struct ResidualEntry {
  std::string name;
  double linf = 0.0;
  double l2 = 0.0;
};

struct ResidualReport {
  std::vector<ResidualEntry> equations;
  int nlat = 0;
  int nlon = 0;
  double tol = 0.0;
  bool pass = false;

  double max_linf() const;
  /// Entry by name, or nullptr.
  const ResidualEntry* find(const std::string& name) const;
  void add(std::string name, const ScalarField& r);
  void finalize(double tolerance);
  /// Appends all entries of another report and re-evaluates pass.
  void merge(const ResidualReport& other);
};

/// |v|^2 + f^2 + 2p.
ScalarField compute_H(const HomogeneousSolution& sol);

struct VorticityParts {
  TangentField u;        // (1 - alpha) v_perp - perp(grad f)
  ScalarField omega;     // curl v
  double compatibility;  // max |(1 - alpha) omega + div u|
};

VorticityParts compute_vorticity_parts(const HomogeneousSolution& sol,
                                       DerivativeScheme scheme = DerivativeScheme::Spectral);

/// Continuity, normal momentum and tangential momentum, in the covariant form
/// and in the literal coordinate form, plus the gap between the two.
ResidualReport check_system(const HomogeneousSolution& sol, double tol,
                            DerivativeScheme scheme = DerivativeScheme::Spectral);

/// v . grad H - 2 alpha f H.
ResidualReport check_bernoulli_transport(const HomogeneousSolution& sol, double tol,
                                         DerivativeScheme scheme = DerivativeScheme::Spectral);

/// u x v - alpha H and f u - omega v + perp(grad H) / 2.
ResidualReport check_vorticity_system(const HomogeneousSolution& sol, double tol,
                                      DerivativeScheme scheme = DerivativeScheme::Spectral);

/// u.grad v - v.grad u - (1 + alpha) omega v + (2 + alpha) f u and
/// v.grad omega - u.grad f - f omega.
ResidualReport check_lie_bracket(const HomogeneousSolution& sol, double tol,
                                 DerivativeScheme scheme = DerivativeScheme::Spectral);

/// Pointwise |(V . grad V) x V| on the unit sphere.
ScalarField geodesic_defect(const HomogeneousSolution& sol,
                            DerivativeScheme scheme = DerivativeScheme::Spectral);

struct SignCheck {
  bool applicable = false;  // only for 0 < alpha < 1
  double max_H = 0.0;
  double system_residual = 0.0;
  bool contradiction = false;  // max_H > tol while the system residual is below tol
};

SignCheck sign_check_H(const HomogeneousSolution& sol, double tol = 1e-6);


/// Residuals of the system at one point, from the analytic closure with
/// sixth-order central differences of step h. Needs sol.closure.
struct PointResidual {
  double continuity = 0.0;
  double normal = 0.0;
  double momentum_phi = 0.0;
  double momentum_theta = 0.0;
  double geodesic = 0.0;
  /// Largest system residual; the geodesic defect is not included.
  double max_abs() const;
};

PointResidual closure_residual(const HomogeneousSolution& sol, double phi, double theta,
                               double h = 1e-3);

}  // namespace homog
