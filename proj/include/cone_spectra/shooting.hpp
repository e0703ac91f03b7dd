#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "cone_spectra/core.hpp"

namespace cone_spectra {

/// lambda * (lambda (p - 1) + (n - p)): the zeroth-order coefficient of the
/// angular equation. Its sign fixes the sign of psi along a trajectory.
template <typename Scalar>
Scalar zeroth_order_coefficient(Scalar lambda, Scalar p, int n) {
  return lambda * (lambda * (p - Scalar(1)) + (Scalar(n) - p));
}

/// Right-hand side of the Riccati-type equation for psi = phi'/phi:
///
///   ((p-1) psi^2 + lambda^2) psi'
///     = -(lambda^2 + psi^2) [(p-1) psi^2 + (n-2) cot(theta) psi
///                            + lambda^2 (p-1) + lambda (n-p)].
template <typename Scalar>
Scalar psi_rhs(Scalar theta, Scalar psi, Scalar lambda, Scalar p, int n) {
  using std::cos;
  using std::sin;
  const Scalar pm1 = p - Scalar(1);
  const Scalar denom = pm1 * psi * psi + lambda * lambda;
  if (!(denom > Scalar(0)))
    throw DegenerateDenominator("(p-1) psi^2 + lambda^2 vanished");
  const Scalar cot = cos(theta) / sin(theta);
  const Scalar bracket = pm1 * psi * psi + Scalar(n - 2) * cot * psi +
                         zeroth_order_coefficient(lambda, p, n);
  return -(lambda * lambda + psi * psi) * bracket / denom;
}

/// Same equation written for chi = 1/psi, regular through the zero of phi
/// where psi -> -infinity:
///
///   chi' = (1 + lambda^2 chi^2) ((p-1) + (n-2) cot(theta) chi + L chi^2)
///          / ((p-1) + lambda^2 chi^2).
template <typename Scalar>
Scalar chi_rhs(Scalar theta, Scalar chi, Scalar lambda, Scalar p, int n) {
  using std::cos;
  using std::sin;
  const Scalar pm1 = p - Scalar(1);
  const Scalar l2c2 = lambda * lambda * chi * chi;
  const Scalar cot = cos(theta) / sin(theta);
  return (Scalar(1) + l2c2) *
         (pm1 + Scalar(n - 2) * cot * chi +
          zeroth_order_coefficient(lambda, p, n) * chi * chi) /
         (pm1 + l2c2);
}

/// d/dtheta of log(phi) - log|chi|, i.e. (1 - chi')/chi written without the
/// removable singularity at chi = 0.
template <typename Scalar>
Scalar chi_log_remainder_rhs(Scalar theta, Scalar chi, Scalar lambda, Scalar p, int n) {
  using std::cos;
  using std::sin;
  const Scalar l2 = lambda * lambda;
  const Scalar L = zeroth_order_coefficient(lambda, p, n);
  const Scalar c = Scalar(n - 2) * cos(theta) / sin(theta);
  const Scalar num = c + chi * (L + l2 * (p - Scalar(2))) + l2 * c * chi * chi +
                     l2 * L * chi * chi * chi;
  return -num / ((p - Scalar(1)) + l2 * chi * chi);
}

/// Slope a of the regular solution psi ~ a theta at the axis.
template <typename Scalar>
Scalar series_slope(Scalar lambda, Scalar p, int n) {
  return -zeroth_order_coefficient(lambda, p, n) / Scalar(n - 1);
}

/// psi(theta0) from the one-term series at the singular start theta = 0.
/// Requires 0 < theta0 <= 1e-3.
template <typename Scalar>
Scalar series_start(Scalar lambda, Scalar p, int n, Scalar theta0) {
  if (!(theta0 > Scalar(0)) || theta0 > Scalar(1e-3))
    throw DomainError("series_start requires 0 < theta0 <= 1e-3");
  return series_slope(lambda, p, n) * theta0;
}

enum class TrajectoryStatus { BlewUp, ReachedPi, Failed };

std::string_view to_string(TrajectoryStatus status);

/// psi integrated from the series start to its blow-up angle.
///
/// Samples are taken at theta_start, at every multiple of
/// Tolerances::sample_step, and at the stopping angle. log_phi is the
/// running integral of psi from 0, carried as an extra ODE component.
struct ShootingTrajectory {
  double lambda = 0.0;
  double p = 2.0;
  int n = 2;
  Eigen::VectorXd theta;
  Eigen::VectorXd psi;
  Eigen::VectorXd log_phi;
  double alpha_star = 0.0;
  TrajectoryStatus status = TrajectoryStatus::Failed;
  long steps = 0;
  std::string message;
};

ShootingTrajectory integrate_psi(double lambda, double p, int n, const Tolerances& tol = {});

/// Same, but stops at theta_end instead of pi - alpha_tol. Samples are
/// skipped when `record` is false (only the endpoints are kept).
ShootingTrajectory integrate_psi_until(double lambda, double p, int n,
                                       const Tolerances& tol, double theta_end,
                                       bool record = true);

/// Blow-up angle of the shooting map; pi when the trajectory reaches pi.
/// Throws StepSizeUnderflow when integration fails.
double alpha_star(double lambda, double p, int n, const Tolerances& tol = {});

enum class SlitSide { BlowsUpBeforePi, ExtendsToPi };

struct SlitClassification {
  SlitSide side = SlitSide::ExtendsToPi;
  // Final value of w = (pi - theta) psi; tends to 0 on the regular side and
  // to -(p+1-n)/(p-1) on the separatrix.
  double w_final = 0.0;
  double log_gap_final = 0.0;  // log(pi - theta) where the decision was made
};

/// Decides whether phi vanishes strictly before pi (requires p > n - 1).
///
/// Near pi, w = (pi - theta) psi obeys dw/ds = -w (c + w) + O(eps^2) in
/// s = -log(pi - theta), c = (p+1-n)/(p-1). w = -c is the unstable
/// separatrix carrying the eigenfunction with alpha = pi; trajectories above
/// it relax to 0 and those below blow up before pi. Integrating in s
/// resolves the decision for lambda arbitrarily close to the endpoint value.
SlitClassification classify_at_pi(double lambda, double p, int n, const Tolerances& tol = {});

}  // namespace cone_spectra
