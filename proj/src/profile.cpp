#include "cone_spectra/profile.hpp"

#include <algorithm>
#include <cmath>

namespace cone_spectra {

namespace {

double end_slope(double h0, double h1, double d0, double d1) {
  double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if ((s > 0.0) != (d0 > 0.0))
    s = 0.0;
  else if ((d0 > 0.0) != (d1 > 0.0) && std::abs(s) > 3.0 * std::abs(d0))
    s = 3.0 * d0;
  return s;
}

}  // namespace

MonotoneCubic::MonotoneCubic(Eigen::VectorXd x, Eigen::VectorXd y)
    : x_(std::move(x)), y_(std::move(y)) {
  const Eigen::Index n = x_.size();
  if (n < 2 || y_.size() != n) throw DomainError("interpolant needs two matching samples");
  slope_ = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd h = x_.tail(n - 1) - x_.head(n - 1);
  const Eigen::VectorXd delta = (y_.tail(n - 1) - y_.head(n - 1)).cwiseQuotient(h);
  if (n == 2) {
    slope_.setConstant(delta(0));
    return;
  }
  for (Eigen::Index k = 1; k < n - 1; ++k) {
    const double d0 = delta(k - 1), d1 = delta(k);
    if (d0 == 0.0 || d1 == 0.0 || (d0 > 0.0) != (d1 > 0.0)) continue;
    const double w1 = 2.0 * h(k) + h(k - 1);
    const double w2 = h(k) + 2.0 * h(k - 1);
    slope_(k) = (w1 + w2) / (w1 / d0 + w2 / d1);
  }
  slope_(0) = end_slope(h(0), h(1), delta(0), delta(1));
  slope_(n - 1) = end_slope(h(n - 2), h(n - 3), delta(n - 2), delta(n - 3));
}

double MonotoneCubic::operator()(double x) const {
  const Eigen::Index n = x_.size();
  const double* begin = x_.data();
  Eigen::Index k = std::upper_bound(begin, begin + n, x) - begin - 1;
  k = std::clamp<Eigen::Index>(k, 0, n - 2);
  const double h = x_(k + 1) - x_(k);
  const double t = (x - x_(k)) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y_(k) + h10 * h * slope_(k) + h01 * y_(k + 1) + h11 * h * slope_(k + 1);
}

Profile reconstruct_phi(const ShootingTrajectory& traj) {
  if (traj.status == TrajectoryStatus::Failed)
    throw DomainError("cannot reconstruct a profile from a failed trajectory");
  Profile prof;
  prof.lambda = traj.lambda;
  prof.alpha = traj.alpha_star;
  prof.theta = traj.theta;
  prof.phi = traj.log_phi.array().exp();
  prof.dphi = traj.psi.cwiseProduct(prof.phi);
  prof.axis_slope = series_slope(traj.lambda, traj.p, traj.n);
  if (prof.theta.size() >= 2) prof.interpolant = MonotoneCubic(prof.theta, prof.phi);
  return prof;
}

double second_order_residual(const Profile& prof, double p, int n) {
  const Eigen::Index size = prof.theta.size();
  // interior nodes 1 .. size-4 (the last two cells are excluded)
  const Eigen::Index last = size - 4;
  if (last < 50) throw GridTooCoarse("second_order_residual needs at least 50 interior nodes");

  const double lam = prof.lambda;
  const double L = zeroth_order_coefficient(lam, p, n);
  const Eigen::ArrayXd sin_w = prof.theta.array().sin().pow(n - 2);
  const Eigen::ArrayXd grad2 =
      lam * lam * prof.phi.array().square() + prof.dphi.array().square();
  const Eigen::ArrayXd power = grad2.pow(0.5 * (p - 2.0));
  const Eigen::ArrayXd flux = power * prof.dphi.array() * sin_w;
  const Eigen::ArrayXd source = L * power * prof.phi.array() * sin_w;

  double worst = 0.0;
  for (Eigen::Index i = 1; i <= last; ++i) {
    const double hl = prof.theta(i) - prof.theta(i - 1);
    const double hr = prof.theta(i + 1) - prof.theta(i);
    const double dflux = (-hr / (hl * (hl + hr))) * flux(i - 1) +
                         ((hr - hl) / (hl * hr)) * flux(i) +
                         (hl / (hr * (hl + hr))) * flux(i + 1);
    worst = std::max(worst, std::abs(dflux + source(i)));
  }
  const double scale = flux.head(last + 2).abs().maxCoeff();
  return scale > 0.0 ? worst / scale : worst;
}

double eval_phi(const Profile& prof, double theta) {
  if (!(theta >= 0.0)) throw DomainError("theta must be nonnegative");
  if (theta > prof.alpha) throw OutOfCone("theta lies outside the cone");
  if (theta == prof.alpha) return 0.0;
  const Eigen::Index size = prof.theta.size();
  if (theta <= prof.theta(0)) return std::exp(0.5 * prof.axis_slope * theta * theta);
  const double t_last = prof.theta(size - 1);
  if (theta >= t_last) {
    // phi vanishes linearly at a blow-up of psi.
    const double span = prof.alpha - t_last;
    return span > 0.0 ? prof.phi(size - 1) * (prof.alpha - theta) / span : prof.phi(size - 1);
  }
  return prof.interpolant(theta);
}

double eval_u(const Profile& prof, double r, double theta) {
  if (!(r > 0.0)) throw DomainError("r must be positive");
  const double phi = eval_phi(prof, theta);
  return std::pow(r, prof.lambda) * phi;
}

}  // namespace cone_spectra
