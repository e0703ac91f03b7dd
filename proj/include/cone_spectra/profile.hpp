#pragma once

#include <Eigen/Dense>

#include "cone_spectra/shooting.hpp"

namespace cone_spectra {

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Carlson
/// slopes with the weighted harmonic mean of Fritsch-Butland).
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(Eigen::VectorXd x, Eigen::VectorXd y);

  double operator()(double x) const;
  double front() const { return x_(0); }
  double back() const { return x_(x_.size() - 1); }

 private:
  Eigen::VectorXd x_, y_, slope_;
};

/// Angular profile phi with phi(0) = 1 on the samples of a trajectory.
struct Profile {
  Eigen::VectorXd theta;
  Eigen::VectorXd phi;
  Eigen::VectorXd dphi;  // phi' = psi phi
  double lambda = 0.0;
  double alpha = 0.0;
  double axis_slope = 0.0;  // psi ~ axis_slope * theta at the axis
  MonotoneCubic interpolant;
};

/// phi = exp(int_0^theta psi), taken from the log_phi component carried by
/// the integrator (the axis head int_0^theta0 psi = a theta0^2 / 2 is part of
/// its initial value). Requires a BlewUp or ReachedPi trajectory.
Profile reconstruct_phi(const ShootingTrajectory& traj);

/// Pointwise residual of the second-order angular equation
///
///   d/dtheta F + L [lambda^2 phi^2 + phi'^2]^((p-2)/2) phi sin^(n-2)(theta),
///   F = [lambda^2 phi^2 + phi'^2]^((p-2)/2) phi' sin^(n-2)(theta),
///
/// with dF/dtheta from three-point differences on the (possibly nonuniform)
/// grid. Returns max |residual| / max |F| over interior nodes, skipping the
/// last two cells. Throws GridTooCoarse below 50 interior nodes.
double second_order_residual(const Profile& prof, double p, int n);

/// Interpolated phi(theta) for 0 <= theta <= alpha; 0 at theta = alpha.
double eval_phi(const Profile& prof, double theta);

/// u(r, theta) = r^lambda phi(theta). Throws OutOfCone for theta > alpha.
double eval_u(const Profile& prof, double r, double theta);

}  // namespace cone_spectra
