#pragma once

// Numerical certificates for built Finsler functions and metrics.

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "berwald/geodesic.hpp"
#include "berwald/metrizer.hpp"
#include "berwald/residual.hpp"

namespace berwald {

struct VerifierTolerances {
  double horizontal = 1e-7;
  double det_min = 1e-10;
  double levi_civita = 1e-6;
  double berwald = 1e-5;
  double geodesic = 1e-6;
  double drift = 1e-8;
  double quadratic_fit = 1e-3;
};

// max_a |d_a L - Gamma^c_ab xdot^b dd_c L| / (1 + |L|). Samples outside
// the domain of L are skipped and counted.
Residual check_horizontal_constancy(const FinslerFunction& L, const ConnectionProfile& conn,
                                    const std::vector<TangentPoint>& samples, double tol = 1e-7);

// g_ab = 1/2 dd_a dd_b L.
Eigen::Matrix4d vertical_metric(const FinslerFunction& L, const TangentPoint& p);
// Eigenvalue signs, e.g. "(+,-,-,-)", ordered by decreasing eigenvalue.
std::string signature_of(const Eigen::Matrix4d& g);

struct HessianReport {
  double min_abs_det = 0.0;
  std::vector<double> where;
  std::string signature;
  bool signature_constant = true;
  double det_min = 1e-10;
  std::size_t samples = 0, skipped = 0;

  bool pass() const { return min_abs_det > det_min && signature_constant; }
};

// Throws Degenerate with the witness sample when |det g| <= det_min.
HessianReport check_hessian(const FinslerFunction& L, const std::vector<TangentPoint>& samples,
                            double det_min = 1e-10);

// Christoffel symbols of a quadratic form from its metric jet.
Christoffel levi_civita(const RiemannForm& A, double t, double r, double theta);
// max |Gamma(A) - Gamma(k)| / (1 + |Gamma(k)|) over the sample positions.
Residual levi_civita_roundtrip(const RiemannForm& A, const ConnectionProfile& conn,
                               const std::vector<TangentPoint>& samples, double tol = 1e-6);

// G^a = 1/4 g^{ab} (xdot^c d_c dd_b L - d_b L).
Vec4 finsler_spray(const FinslerFunction& L, const TangentPoint& p);

// Third directional differences of the spray of L in the velocities,
// relative to 1 + |G|. Zero for a quadratic spray.
Residual berwald_check(const FinslerFunction& L, const std::vector<TangentPoint>& samples,
                       double tol = 1e-5);

struct GeodesicAgreement {
  Residual discrepancy;  // sup-norm between autoparallel and Finsler geodesic
  Residual drift;        // change of L along the autoparallel, relative unless L(p0) is ~0
  Trajectory autoparallel, finsler;
};

GeodesicAgreement geodesic_agreement(const FinslerFunction& L, const ConnectionProfile& conn,
                                     const TangentPoint& p0, double T, double tol = 1e-6,
                                     double drift_tol = 1e-8, int n_out = 100);

// Fit of a constant-coefficient quadratic a_ef xdot^e xdot^f annihilated by
// every bracket vector field at fixed (t, r, theta), over random velocities.
struct QuadraticFit {
  // 0 when a nondegenerate solution exists; otherwise the smallest
  // normalised singular value outside the degenerate null space.
  double residual = 0.0;
  int null_dim = 0;
  bool nondegenerate_solution = false;
  std::vector<double> where;
  std::size_t rows = 0;
  double threshold = 1e-3;

  bool rules_out() const { return residual > threshold; }
};

QuadraticFit quadratic_fit(const ConnectionProfile& conn, double t, double r, double theta,
                           std::size_t velocities = 40, std::uint64_t seed = 1);
// Worst case (largest residual) over several points.
QuadraticFit quadratic_fit(const ConnectionProfile& conn,
                           const std::vector<std::array<double, 3>>& points,
                           std::size_t velocities = 40, std::uint64_t seed = 1);

}  // namespace berwald
