#include "cone_spectra/pdevalidate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cone_spectra {

using Eigen::ArrayXXd;
using Eigen::MatrixXd;

MeridianGrid::MeridianGrid(double r_min, double r_max, double theta_cap, int nr_, int ntheta_,
                           int n_)
    : r_range{r_min, r_max}, theta_range{0.0, theta_cap}, nr(nr_), ntheta(ntheta_), n(n_) {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw DomainError("need 0 < r_min < r_max");
  if (!(theta_cap > 0.0) || theta_cap > kPi - 0.1)
    throw DomainError("theta_cap must lie in (0, pi - 0.1]");
  if (nr < 16 || ntheta < 16) throw DomainError("meridian grid needs at least 16 x 16 cells");
  if (n < 2) throw DomainError("n must be at least 2");
  weight.resize(nr, ntheta);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < ntheta; ++j) {
      const double rc = r(i) + 0.5 * dr();
      const double tc = theta(j) + 0.5 * dtheta();
      weight(i, j) = std::pow(rc, n - 1) * std::pow(std::sin(tc), n - 2);
    }
}

namespace {

// Each cell (i, j) is split along the diagonal (i+1, j)-(i, j+1) into
// triangle A = {(i,j), (i+1,j), (i,j+1)} and B = {(i+1,j+1), (i,j+1), (i+1,j)}.
// Gradients are constant on each triangle; the weight is taken at centroids.
class Energy {
 public:
  Energy(const MeridianGrid& grid, double p, double eps) : p_(p), eps2_(eps * eps) {
    nr_ = grid.nr;
    nt_ = grid.ntheta;
    dr_ = grid.dr();
    dt_ = grid.dtheta();
    const double area = 0.5 * dr_ * dt_;
    wa_.resize(nr_, nt_);
    wb_.resize(nr_, nt_);
    ia_.resize(nr_, nt_);
    ib_.resize(nr_, nt_);
    for (int i = 0; i < nr_; ++i)
      for (int j = 0; j < nt_; ++j) {
        const double ra = grid.r(i) + dr_ / 3, ta = grid.theta(j) + dt_ / 3;
        const double rb = grid.r(i) + 2 * dr_ / 3, tb = grid.theta(j) + 2 * dt_ / 3;
        wa_(i, j) = area * std::pow(ra, grid.n - 1) * std::pow(std::sin(ta), grid.n - 2);
        wb_(i, j) = area * std::pow(rb, grid.n - 1) * std::pow(std::sin(tb), grid.n - 2);
        ia_(i, j) = 1.0 / (ra * ra);
        ib_(i, j) = 1.0 / (rb * rb);
      }
  }

  double value(const MatrixXd& u) const {
    Parts s = parts(u);
    return (wa_ * s.sa.pow(0.5 * p_)).sum() + (wb_ * s.sb.pow(0.5 * p_)).sum();
  }

  // Gradient with respect to every nodal value (Dirichlet rows not masked).
  double value_and_gradient(const MatrixXd& u, MatrixXd& g) const {
    Parts s = parts(u);
    const ArrayXXd pa = s.sa.pow(0.5 * p_ - 1.0), pb = s.sb.pow(0.5 * p_ - 1.0);
    const double e = (wa_ * pa * s.sa).sum() + (wb_ * pb * s.sb).sum();
    const ArrayXXd ca = p_ * wa_ * pa, cb = p_ * wb_ * pb;
    const ArrayXXd cra = ca * s.gra / dr_, cta = ca * s.gta * ia_ / dt_;
    const ArrayXXd crb = cb * s.grb / dr_, ctb = cb * s.gtb * ib_ / dt_;
    g.setZero(nr_ + 1, nt_ + 1);
    g.block(1, 0, nr_, nt_).array() += cra;
    g.block(0, 0, nr_, nt_).array() -= cra + cta;
    g.block(0, 1, nr_, nt_).array() += cta - crb;
    g.block(1, 1, nr_, nt_).array() += crb + ctb;
    g.block(1, 0, nr_, nt_).array() -= ctb;
    return e;
  }

  // Diagonal of the Hessian with the rank-one (p-2) term dropped.
  MatrixXd diagonal(const MatrixXd& u) const {
    Parts s = parts(u);
    const ArrayXXd ca = p_ * wa_ * s.sa.pow(0.5 * p_ - 1.0);
    const ArrayXXd cb = p_ * wb_ * s.sb.pow(0.5 * p_ - 1.0);
    const double r2 = 1.0 / (dr_ * dr_), t2 = 1.0 / (dt_ * dt_);
    MatrixXd d = MatrixXd::Zero(nr_ + 1, nt_ + 1);
    d.block(1, 0, nr_, nt_).array() += ca * r2;
    d.block(0, 0, nr_, nt_).array() += ca * (r2 + ia_ * t2);
    d.block(0, 1, nr_, nt_).array() += ca * ia_ * t2 + cb * r2;
    d.block(1, 1, nr_, nt_).array() += cb * (r2 + ib_ * t2);
    d.block(1, 0, nr_, nt_).array() += cb * ib_ * t2;
    return d;
  }

 private:
  struct Parts {
    ArrayXXd gra, gta, grb, gtb, sa, sb;
  };

  Parts parts(const MatrixXd& u) const {
    Parts s;
    const ArrayXXd dr = (u.bottomRows(nr_) - u.topRows(nr_)).array() / dr_;
    const ArrayXXd dt = (u.rightCols(nt_) - u.leftCols(nt_)).array() / dt_;
    s.gra = dr.leftCols(nt_);
    s.gta = dt.topRows(nr_);
    s.grb = dr.rightCols(nt_);
    s.gtb = dt.bottomRows(nr_);
    s.sa = s.gra.square() + s.gta.square() * ia_ + eps2_;
    s.sb = s.grb.square() + s.gtb.square() * ib_ + eps2_;
    return s;
  }

  double p_, eps2_;
  int nr_ = 0, nt_ = 0;
  double dr_ = 0, dt_ = 0;
  ArrayXXd wa_, wb_, ia_, ib_;
};

double dot(const MatrixXd& a, const MatrixXd& b) { return a.cwiseProduct(b).sum(); }

}  // namespace

ValidationReport minimize_energy(const MeridianGrid& grid,
                                 const std::function<double(double, double)>& exact, double p,
                                 int n, const MinimizerOptions& options) {
  if (grid.n != n) throw DomainError("grid was built for a different dimension");
  validate_exponents(p, n);
  const int nr = grid.nr, nt = grid.ntheta;

  MatrixXd target(nr + 1, nt + 1);
  for (int i = 0; i <= nr; ++i)
    for (int j = 0; j <= nt; ++j) target(i, j) = exact(grid.r(i), grid.theta(j));

  // free[i,j] = 1 off the Dirichlet edges r = r_min, r = r_max, theta = cap
  MatrixXd free_mask = MatrixXd::Zero(nr + 1, nt + 1);
  free_mask.block(1, 0, nr - 1, nt).setOnes();

  ValidationReport report;
  report.grid = grid;
  {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i <= nr; ++i)
      for (int j = 0; j <= nt; ++j)
        if (free_mask(i, j) == 0.0) {
          lo = std::min(lo, target(i, j));
          hi = std::max(hi, target(i, j));
        }
    report.boundary_min = lo;
    report.boundary_max = hi;
  }
  const double scale = std::max(std::abs(report.boundary_min), std::abs(report.boundary_max));
  const Energy energy(grid, p, options.regularization * std::max(scale, 1e-300));

  // Start from the boundary data blended linearly in r between the arcs.
  MatrixXd u = target;
  for (int i = 1; i < nr; ++i) {
    const double t = static_cast<double>(i) / nr;
    for (int j = 0; j < nt; ++j) u(i, j) = (1 - t) * target(0, j) + t * target(nr, j);
  }

  MatrixXd g, g_new, trial_g;
  double e = energy.value_and_gradient(u, g);
  g = g.cwiseProduct(free_mask);
  const double g0 = g.norm();
  report.energy_trace.push_back(e);

  auto preconditioner = [&](const MatrixXd& at) {
    MatrixXd d = energy.diagonal(at);
    return MatrixXd((free_mask.array() / d.array().max(1e-300)).matrix());
  };
  MatrixXd minv = preconditioner(u);
  MatrixXd z = minv.cwiseProduct(g);
  MatrixXd dir = -z;
  double gz = dot(g, z);
  double gnorm = g0;
  long iter = 0;
  double t_prev = 0.0;
  double best_gnorm = g0;
  long best_iter = 0;
  const long restart_every = std::max(50, 2 * (nr + nt));

  while (g0 > 0.0 && gnorm > options.gradient_reduction * g0 && iter < options.max_iterations) {
    ++iter;
    double slope0 = dot(g, dir);
    if (!(slope0 < 0.0)) {
      dir = -z;
      slope0 = -gz;
      if (!(slope0 < 0.0)) break;
    }
    // Secant iteration on the directional derivative, safeguarded by a
    // bracket. Energy differences sit at roundoff level near the minimum, so
    // acceptance is driven by the slope.
    const double dnorm = dir.norm();
    double t = t_prev > 0.0 ? t_prev : 1e-3 * std::max(1.0, u.norm()) / dnorm;
    double lo = 0.0, slope_lo = slope0;
    double hi = -1.0, slope_hi = 0.0;
    double t_acc = 0.0;
    for (int ls = 0; ls < 40; ++ls) {
      const double et = energy.value_and_gradient(u + t * dir, trial_g);
      const double st = dot(trial_g.cwiseProduct(free_mask), dir);
      const bool finite = std::isfinite(et) && std::isfinite(st);
      if (finite && et <= e + 1e-13 * std::abs(e)) {
        t_acc = t;
        if (std::abs(st) <= 1e-2 * std::abs(slope0)) break;
      }
      if (finite && st < 0.0) {
        lo = t;
        slope_lo = st;
      } else {
        hi = t;
        slope_hi = finite ? st : std::numeric_limits<double>::infinity();
      }
      if (hi < 0.0) {
        t *= 4.0;
        continue;
      }
      double next = 0.5 * (lo + hi);
      if (std::isfinite(slope_hi)) {
        const double secant = lo - slope_lo * (hi - lo) / (slope_hi - slope_lo);
        if (secant > lo + 0.01 * (hi - lo) && secant < hi - 0.01 * (hi - lo)) next = secant;
      }
      t = next;
    }
    if (t_acc == 0.0) {
      if (dir.isApprox(-z)) break;
      dir = -z;
      t_prev = 0.0;
      continue;
    }
    t_prev = t_acc;

    u += t_acc * dir;
    e = energy.value_and_gradient(u, g_new);
    g_new = g_new.cwiseProduct(free_mask);
    report.energy_trace.push_back(e);

    if (iter % restart_every == 0) {
      minv = preconditioner(u);
      g = g_new;
      z = minv.cwiseProduct(g);
      gz = dot(g, z);
      dir = -z;
    } else {
      const MatrixXd z_new = minv.cwiseProduct(g_new);
      const double gz_new = dot(g_new, z_new);
      const double beta = std::max(0.0, (gz_new - dot(g_new, z)) / gz);
      g = g_new;
      z = z_new;
      gz = gz_new;
      dir = -z + beta * dir;
    }
    gnorm = g.norm();
    if (gnorm < 0.5 * best_gnorm) {
      best_gnorm = gnorm;
      best_iter = iter;
    } else if (iter - best_iter > 4 * restart_every &&
               gnorm <= options.required_reduction * g0) {
      break;  // roundoff floor reached
    }
  }

  report.iterations = iter;
  report.gradient_reduction = g0 > 0.0 ? gnorm / g0 : 0.0;
  if (report.gradient_reduction > options.required_reduction)
    throw NonConvergence("gradient norm fell only by " + std::to_string(report.gradient_reduction));
  report.energy = e;

  double rel = 0.0, abs_dev = 0.0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i <= nr; ++i)
    for (int j = 0; j <= nt; ++j) {
      if (free_mask(i, j) == 0.0) continue;
      const double d = std::abs(u(i, j) - target(i, j));
      abs_dev = std::max(abs_dev, d);
      rel = std::max(rel, d / (std::abs(target(i, j)) + 1e-12));
      lo = std::min(lo, u(i, j));
      hi = std::max(hi, u(i, j));
    }
  report.max_rel_deviation = rel;
  report.max_abs_deviation = abs_dev;
  report.interior_min = lo;
  report.interior_max = hi;
  report.solution = std::move(u);
  return report;
}

ValidationReport minimize_energy(const MeridianGrid& grid, double lambda, const Profile& prof,
                                 double p, int n, const MinimizerOptions& options) {
  if (grid.theta_range.second >= prof.alpha)
    throw DomainError("theta_cap must lie inside the cone");
  return minimize_energy(
      grid, [&](double r, double theta) { return std::pow(r, lambda) * eval_phi(prof, theta); }, p,
      n, options);
}

}  // namespace cone_spectra
