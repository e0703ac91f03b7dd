#include "cone_spectra/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cone_spectra/dopri5.hpp"

namespace cone_spectra {

std::string_view to_string(TrajectoryStatus status) {
  switch (status) {
    case TrajectoryStatus::BlewUp:
      return "blew_up";
    case TrajectoryStatus::ReachedPi:
      return "reached_pi";
    case TrajectoryStatus::Failed:
      return "failed";
  }
  return "failed";
}

namespace {

using Stepper = DormandPrince<double, 2>;
using State = Stepper::State;

constexpr double kMaxStep = 0.05;
constexpr long kMaxSteps = 400000;
// Hysteresis for switching between psi and chi = 1/psi.
constexpr double kToChi = -1.0;
constexpr double kToPsi = -2.0;

struct Sampler {
  bool record = true;
  double spacing = 1e-3;
  std::vector<double> theta, psi, log_phi;
  long next_index = 1;

  void push(double t, double ps, double lp) {
    theta.push_back(t);
    psi.push_back(ps);
    log_phi.push_back(lp);
  }

  // Emits the uniform samples falling in (t0, t1].
  template <typename Eval>
  void fill(double t0, double t1, Eval&& eval) {
    if (!record) return;
    while (true) {
      const double t = static_cast<double>(next_index) * spacing;
      if (t > t1) break;
      if (t > t0) {
        const auto [ps, lp] = eval(t);
        push(t, ps, lp);
      }
      ++next_index;
    }
  }
};

enum class Phase { Psi, Chi };

}  // namespace

ShootingTrajectory integrate_psi_until(double lambda, double p, int n,
                                       const Tolerances& tol, double theta_end,
                                       bool record) {
  if (lambda == 0.0 || !std::isfinite(lambda))
    throw DomainError("trial lambda must be finite and nonzero");
  validate_exponents(p, n);

  ShootingTrajectory traj;
  traj.lambda = lambda;
  traj.p = p;
  traj.n = n;

  const double theta0 = tol.theta_start;
  const double slope = series_slope(lambda, p, n);
  const double psi0 = series_start(lambda, p, n, theta0);
  const double log_phi0 = 0.5 * slope * theta0 * theta0;

  Sampler samples;
  samples.record = record;
  samples.spacing = tol.sample_step;
  samples.push(theta0, psi0, log_phi0);

  auto finish = [&](TrajectoryStatus status) {
    traj.status = status;
    traj.theta = Eigen::Map<Eigen::VectorXd>(samples.theta.data(),
                                             static_cast<Eigen::Index>(samples.theta.size()));
    traj.psi = Eigen::Map<Eigen::VectorXd>(samples.psi.data(),
                                           static_cast<Eigen::Index>(samples.psi.size()));
    traj.log_phi = Eigen::Map<Eigen::VectorXd>(
        samples.log_phi.data(), static_cast<Eigen::Index>(samples.log_phi.size()));
    return traj;
  };

  // With L <= 0 psi starts nonnegative and psi = 0 can only be crossed
  // upward, so phi never vanishes.
  if (zeroth_order_coefficient(lambda, p, n) <= 0.0) {
    traj.alpha_star = kPi;
    traj.message = "psi is nonnegative; no zero of phi";
    return finish(TrajectoryStatus::ReachedPi);
  }

  auto psi_system = [&](double t, const State& y) {
    State dy;
    dy(0) = psi_rhs(t, y(0), lambda, p, n);
    dy(1) = y(0);
    return dy;
  };
  auto chi_system = [&](double t, const State& y) {
    State dy;
    dy(0) = chi_rhs(t, y(0), lambda, p, n);
    dy(1) = chi_log_remainder_rhs(t, y(0), lambda, p, n);
    return dy;
  };

  const double chi_stop = -1.0 / tol.psi_blowup_threshold;
  Stepper rk(tol.ode_rel_tol, tol.ode_abs_tol);
  Phase phase = Phase::Psi;
  rk.start(psi_system, theta0, State(psi0, log_phi0));
  if (psi0 < kToChi) {
    phase = Phase::Chi;
    rk.start(chi_system, theta0, State(1.0 / psi0, log_phi0 + std::log(-psi0)));
  }

  auto to_psi_log = [](Phase ph, const State& y) -> std::pair<double, double> {
    if (ph == Phase::Psi) return {y(0), y(1)};
    return {1.0 / y(0), y(1) + std::log(std::abs(y(0)))};
  };

  double h = std::min(1e-3, 0.5 * (theta_end - theta0));
  double h_next = h;
  while (true) {
    if (traj.steps >= kMaxSteps) {
      traj.message = "step budget exhausted";
      traj.alpha_star = rk.t();
      return finish(TrajectoryStatus::Failed);
    }
    const double t = rk.t();
    const State& y = rk.y();
    h = std::min(h, kMaxStep);
    if (phase == Phase::Psi) {
      h = std::min(h, 0.1 / (y(0) * y(0) + 1e-300));
    } else {
      // chi moves at unit speed near the zero of phi; keep well short of it.
      h = std::min(h, 0.5 * std::abs(y(0)));
    }
    bool last = false;
    if (t + h >= theta_end) {
      h = theta_end - t;
      last = true;
    }
    if (!(h > 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))) {
      traj.message = "step size underflow at theta=" + std::to_string(t);
      traj.alpha_star = t;
      return finish(TrajectoryStatus::Failed);
    }

    const bool accepted = phase == Phase::Psi ? rk.try_step(psi_system, h, h_next)
                                              : rk.try_step(chi_system, h, h_next);
    ++traj.steps;
    if (!accepted) {
      h = h_next;
      continue;
    }
    const double t0 = rk.t_prev();
    double t1 = rk.t();
    if (last) t1 = theta_end;
    const State y1 = rk.y();

    if (phase == Phase::Chi && y1(0) >= chi_stop) {
      // Locate chi = chi_stop on the dense output; chi is increasing here.
      double lo = t0, hi = t1;
      for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi;
           ++it) {
        const double mid = 0.5 * (lo + hi);
        if (rk.dense(mid)(0) >= chi_stop)
          hi = mid;
        else
          lo = mid;
      }
      const double t_stop = hi;
      const Phase ph = phase;
      samples.fill(t0, t_stop, [&](double ts) { return to_psi_log(ph, rk.dense(ts)); });
      const State ys = rk.dense(t_stop);
      const auto [ps, lp] = to_psi_log(phase, ys);
      if (samples.theta.back() < t_stop) samples.push(t_stop, ps, lp);
      // Newton step on chi(alpha*) = 0; reduces to the dominant-balance
      // tail 1/|psi| when the cot term is negligible.
      const double slope_chi = chi_rhs(t_stop, ys(0), lambda, p, n);
      const double tail = slope_chi > 0.0 ? -ys(0) / slope_chi : -ys(0);
      traj.alpha_star = std::min(t_stop + tail, kPi);
      return finish(TrajectoryStatus::BlewUp);
    }

    const Phase ph = phase;
    samples.fill(t0, t1, [&](double ts) { return to_psi_log(ph, rk.dense(ts)); });

    if (last) {
      const auto [ps, lp] = to_psi_log(phase, y1);
      if (samples.theta.back() < t1) samples.push(t1, ps, lp);
      traj.alpha_star = kPi;
      return finish(TrajectoryStatus::ReachedPi);
    }

    if (phase == Phase::Psi && y1(0) < kToChi) {
      phase = Phase::Chi;
      rk.start(chi_system, t1, State(1.0 / y1(0), y1(1) + std::log(-y1(0))));
    } else if (phase == Phase::Chi && y1(0) < kToPsi) {
      phase = Phase::Psi;
      rk.start(psi_system, t1, State(1.0 / y1(0), y1(1) + std::log(-y1(0))));
    }
    h = h_next;
  }
}

ShootingTrajectory integrate_psi(double lambda, double p, int n, const Tolerances& tol) {
  return integrate_psi_until(lambda, p, n, tol, kPi - tol.alpha_tol, true);
}

double alpha_star(double lambda, double p, int n, const Tolerances& tol) {
  const auto traj = integrate_psi_until(lambda, p, n, tol, kPi - tol.alpha_tol, false);
  if (traj.status == TrajectoryStatus::Failed) throw StepSizeUnderflow(traj.message);
  return traj.alpha_star;
}

SlitClassification classify_at_pi(double lambda, double p, int n, const Tolerances& tol) {
  validate_exponents(p, n);
  if (!(p > n - 1)) throw DomainError("classification at pi requires p > n-1");
  const double c = (p + 1.0 - n) / (p - 1.0);

  SlitClassification out;
  if (zeroth_order_coefficient(lambda, p, n) <= 0.0) {
    out.side = SlitSide::ExtendsToPi;
    return out;
  }

  constexpr double eps_switch = 1e-3;
  const auto traj = integrate_psi_until(lambda, p, n, tol, kPi - eps_switch, false);
  if (traj.status == TrajectoryStatus::Failed) throw StepSizeUnderflow(traj.message);
  if (traj.status == TrajectoryStatus::BlewUp) {
    out.side = SlitSide::BlowsUpBeforePi;
    out.w_final = -std::numeric_limits<double>::infinity();
    out.log_gap_final = std::log(kPi - traj.alpha_star);
    return out;
  }

  const double psi_end = traj.psi(traj.psi.size() - 1);
  const double w0 = eps_switch * psi_end;

  const double pm1 = p - 1.0;
  const double L = zeroth_order_coefficient(lambda, p, n);
  const double l2 = lambda * lambda;
  using Stepper1 = DormandPrince<double, 1>;
  using W = Stepper1::State;
  auto rhs = [&](double s, const W& wv) {
    const double w = wv(0);
    const double eps = std::exp(-s);
    // eps * cot(pi - eps) without forming pi - eps.
    const double eps_cot = eps == 0.0 ? -1.0 : -eps * std::cos(eps) / std::sin(eps);
    const double e2 = eps * eps;
    const double val = -w - (l2 * e2 + w * w) *
                                (pm1 * w * w + (n - 2) * eps_cot * w + e2 * L) /
                                (pm1 * w * w + l2 * e2);
    return W(val);
  };

  const double upper = -0.5 * c;
  const double lower = -c - std::max(0.5 * c, 0.5);
  const double s_max = 700.0;
  Stepper1 rk(1e-12, 1e-14);
  double s = -std::log(eps_switch);
  rk.start(rhs, s, W(w0));
  double h = 0.01, h_next = h;
  long steps = 0;
  while (true) {
    const double w = rk.y()(0);
    if (w > upper) {
      out.side = SlitSide::ExtendsToPi;
      break;
    }
    if (w < lower) {
      out.side = SlitSide::BlowsUpBeforePi;
      break;
    }
    if (rk.t() >= s_max || ++steps > kMaxSteps) {
      out.side = w > -c ? SlitSide::ExtendsToPi : SlitSide::BlowsUpBeforePi;
      break;
    }
    h = std::min({h, 1.0, s_max - rk.t()});
    if (!rk.try_step(rhs, h, h_next)) {
      if (h_next < 1e-14) throw StepSizeUnderflow("separatrix integration stalled");
    }
    h = h_next;
  }
  out.w_final = rk.y()(0);
  out.log_gap_final = -rk.t();
  return out;
}

}  // namespace cone_spectra
