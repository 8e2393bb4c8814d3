#pragma once

// Axisymmetric reduction: the four-dimensional ODE in phi, its two first
// integrals, the explicit constant-pressure solutions, and the no-swirl
// shooting problem in t = -cos(phi).

#include <vector>

#include "homog/families.hpp"

namespace homog {

struct AxiState {
  double phi = 0.5 * 3.14159265358979323846;
  double f = 0.0;
  double a = 0.0;
  double b = 0.0;
  double p = 0.0;
  double alpha = -1.0;
};

struct AxiDerivative {
  double f = 0.0;
  double a = 0.0;
  double b = 0.0;
  double p = 0.0;
};

/// (f', a', b', p') from the reduced system; throws SingularRhsError when |a| < a_floor.
AxiDerivative axi_rhs(const AxiState& s, double a_floor = 1e-14);

double axi_bernoulli(const AxiState& s);
/// |b|^(2-alpha) |a|^(alpha-1) sin(phi).
double first_integral_A(const AxiState& s);
/// |H|^(2-alpha) |a sin(phi)|^(2 alpha).
double first_integral_B(const AxiState& s);
/// a f' - (a^2 + b^2 + alpha f^2 + 2 alpha p) with f' recomputed from the state.
double axi_normal_residual(const AxiState& s, double f_prime);

struct AxiTrajectory {
  double alpha = -1.0;
  std::vector<AxiState> states;  // ordered by integration, phi monotone
  bool blew_up = false;
  bool singular = false;  // |a| fell below the floor
};

AxiTrajectory integrate_axi(const AxiState& start, double phi_end, double tol = 1e-9);

struct DriftReport {
  bool a_applicable = false;  // ab != 0 along the span
  bool b_applicable = false;  // aH != 0 along the span
  double drift_A = 0.0;       // max relative deviation from the initial value
  double drift_B = 0.0;
};

DriftReport invariants_check(const AxiTrajectory& traj);

/// Explicit solution with constant pressure through v(phi0) = a0 e_phi + b0 e_theta;
/// zero outside the band |v0|^2 R^2 > b0^2, R = sin(phi) / sin(phi0).
PointValues explicit_const_p_point(double alpha, double phi0, double a0, double b0, double phi);
HomogeneousSolution explicit_const_p(double alpha, double phi0, double a0, double b0,
                                     const GridPtr& grid);

struct NoSwirlState {
  double t = 0.0;  // -cos(phi)
  double x = 0.0;  // a sin(phi)
  double f = 0.0;
  double alpha = -1.0;
  double B = 0.0;  // H = B |x|^(2 alpha / (alpha - 2))
};

struct NoSwirlDerivative {
  double x = 0.0;
  double f = 0.0;
};

/// x' = (alpha - 2) f, f' = alpha B |x|^(4/(alpha-2)) x + (1 - alpha) x / (1 - t^2).
/// Throws std::domain_error for |t| >= 1.
NoSwirlDerivative noswirl_rhs(const NoSwirlState& s);

/// (2 - alpha) f^2 + (1 - alpha) x^2 / (1 - t^2) - (2 - alpha) B |x|^(2 alpha / (alpha - 2)).
/// Its t-derivative along trajectories is 2 (1 - alpha) t x^2 / (1 - t^2)^2.
double noswirl_lyapunov(const NoSwirlState& s);

/// Regular data at t = -1 + delta, normalised so that f(-1) = 1.
NoSwirlState noswirl_launch(double alpha, double B, double delta);

std::vector<NoSwirlState> integrate_noswirl(const NoSwirlState& start, double t_end,
                                            double tol = 1e-12);

struct ShootResult {
  double alpha = 0.0;
  double B = 0.0;
  double defect = 0.0;  // x extrapolated to t = 1
  double x_end = 0.0;   // x(1 - delta)
  bool blew_up = false;
};

ShootResult shoot_endpoint(double alpha, double B, double tol = 1e-12, double delta = 1e-6);

struct ScanRow {
  double alpha = 0.0;
  double B = 0.0;
  double defect = 0.0;
  bool blew_up = false;
  bool near_zero = false;  // |defect| < threshold or a sign change to the next row
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::vector<double> zeros;  // defect roots located between sign changes
};

ScanResult scan_alpha(double alpha_lo, double alpha_hi, double B, int n_samples,
                      double tol = 1e-12, double threshold = 1e-5);

}  // namespace homog
