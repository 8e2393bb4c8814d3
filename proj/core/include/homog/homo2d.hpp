#pragma once

// Two-dimensional homogeneous solutions Psi = r^(1-alpha) psi(theta):
// the Hamiltonian reduction in (x, y) = (psi, psi'), arch lengths, gluing,
// and the elliptic classification.

#include <limits>
#include <optional>
#include <vector>

#include "homog/families.hpp"

namespace homog {

struct Phase2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double alpha = -1.0;
  double bern = 0.0;
  double p_const = 0.0;
};

/// (2p + (1-alpha)^2 x^2 + y^2) |x|^(2 alpha / (1 - alpha)); +inf at x = 0
/// when the exponent is negative.
double bernoulli_2d(double x, double y, double alpha, double p_const);

/// -y^2/2 - (1-alpha)^2 x^2/2 + (B/2) |x|^(2 alpha / (alpha - 1)).
double hamiltonian_2d(double x, double y, double alpha, double B);

struct Orbit2D {
  std::vector<double> theta;
  std::vector<double> x;
  std::vector<double> y;
  bool hit_zero = false;
  bool blew_up = false;
  double hamiltonian_drift = 0.0;  // max |p - p(start)|
};

/// Integrates x' = y, y' = -(1-alpha)^2 x + alpha/(alpha-1) B sgn(x) |x|^((alpha+1)/(alpha-1))
/// over theta_span, stopping at the first zero of x when stop_at_zero.
Orbit2D integrate_orbit(const Phase2D& start, double theta_span, double tol = 1e-12,
                        bool stop_at_zero = true);

/// Length of a positive arch at p = -1: from x = 0, y = sqrt(2) to the next zero.
/// B = +inf gives the shear limit pi. Throws IntegrationError if x does not
/// return to zero within 2 pi max_windings.
double time_span(double alpha, double B, double tol = 1e-12, int max_windings = 8);

struct GluedProfile {
  Solution2D solution;
  std::vector<double> B;
  std::vector<double> T;
};

/// Glues alternating arches at p = -1. When the spans sum to 2 pi within
/// polish_window the last B is adjusted to close the period exactly; otherwise,
/// or for an odd number of pieces, the result is empty. All-infinite lists
/// give the shear profile sin(theta) |sin(theta)|^(-alpha).
std::optional<GluedProfile> glue_hyperbolic(double alpha, const std::vector<double>& B_list,
                                            double polish_window = 1e-2);

struct EllipticCount {
  bool exceptional = false;  // alpha = -1: a continuum of elliptic solutions
  int count = 0;
};

/// Number of non-trivial elliptic solutions; throws std::invalid_argument for alpha > -1.
EllipticCount count_elliptic(double alpha);

/// (1 / (2 (1 - alpha))) (alpha / (alpha - 1)^3)^(-alpha), for B = 1.
double p_max(double alpha);

/// Positive equilibrium of the Hamiltonian system.
double equilibrium_x(double alpha, double B);

/// psi = g1 + g2 cos(2 theta), p = 2 (g1^2 - g2^2) at alpha = -1; needs g1 > |g2|.
Solution2D elliptic_exceptional(double gamma1, double gamma2);

/// max over theta samples of |2 alpha p + alpha psi'^2 + (1-alpha)^2 psi^2 + (1-alpha) psi'' psi|.
double ode2d_residual(const Solution2D& sol, int samples = 512);

/// max - min of the Bernoulli quantity over theta samples where psi != 0.
double bernoulli_spread(const Solution2D& sol, int samples = 512);

struct SpanRow {
  double B = 0.0;
  double T = 0.0;
};

std::vector<SpanRow> time_span_table(double alpha, const std::vector<double>& B_values,
                                     double tol = 1e-12);

}  // namespace homog
