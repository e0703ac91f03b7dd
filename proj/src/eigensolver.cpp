#include "cone_spectra/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cone_spectra/profile.hpp"
#include "cone_spectra/roots.hpp"
#include "cone_spectra/shooting.hpp"

namespace cone_spectra {

namespace {

constexpr int kMaxExpansions = 60;
constexpr int kMaxRootIterations = 200;

// Signed mismatch oriented so that it decreases as lambda moves away from 0:
// positive means the trial lambda is too close to 0 (blow-up beyond alpha).
struct Mismatch {
  const ConeProblem& problem;
  const Tolerances& tol;

  double operator()(double lambda) const {
    if (is_slit(problem.alpha)) {
      const auto cls = classify_at_pi(lambda, problem.p, problem.n, tol);
      return cls.side == SlitSide::ExtendsToPi ? 1.0 : -1.0;
    }
    return alpha_star(lambda, problem.p, problem.n, tol) - problem.alpha;
  }
};

struct Bracket {
  double inner = 0.0, outer = 0.0;  // |inner| < |outer|
  double g_inner = 0.0, g_outer = 0.0;
  bool seed_hit = false;
};

Bracket find_bracket(const ConeProblem& problem, const Tolerances& tol) {
  const Mismatch g{problem, tol};
  const double sign = branch_sign(problem.branch);
  const double seed = sign;
  const double g_seed = g(seed);
  Bracket b;
  if (!is_slit(problem.alpha) && std::abs(g_seed) <= tol.alpha_tol) {
    b.inner = b.outer = seed;
    b.g_inner = b.g_outer = g_seed;
    b.seed_hit = true;
    return b;
  }
  const double slack = is_slit(problem.alpha) ? 0.0 : tol.alpha_tol;
  if (g_seed > 0.0) {
    // move away from 0
    double prev = seed, g_prev = g_seed;
    for (int k = 0; k < kMaxExpansions; ++k) {
      const double next = prev * 2.0;
      const double g_next = g(next);
      if (g_next > g_prev + slack) {
        std::ostringstream os;
        os << "shooting map not monotone between lambda=" << prev << " and " << next;
        throw NonMonotoneShootingMap(os.str());
      }
      if (g_next <= 0.0) {
        b = {prev, next, g_prev, g_next, false};
        return b;
      }
      prev = next;
      g_prev = g_next;
    }
  } else {
    // move toward 0
    double prev = seed, g_prev = g_seed;
    for (int k = 0; k < kMaxExpansions; ++k) {
      const double next = prev * 0.5;
      const double g_next = g(next);
      if (g_next < g_prev - slack) {
        std::ostringstream os;
        os << "shooting map not monotone between lambda=" << next << " and " << prev;
        throw NonMonotoneShootingMap(os.str());
      }
      if (g_next >= 0.0) {
        b = {next, prev, g_next, g_prev, false};
        return b;
      }
      prev = next;
      g_prev = g_next;
    }
  }
  std::ostringstream os;
  os << "no bracket for alpha=" << problem.alpha << " (" << to_string(problem.branch)
     << ", p=" << problem.p << ", n=" << problem.n << ")";
  throw BracketNotFound(os.str());
}

std::pair<double, double> ordered(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

std::pair<double, double> bracket_lambda(const ConeProblem& problem, const Tolerances& tol) {
  validate(problem);
  const Bracket b = find_bracket(problem, tol);
  return ordered(b.inner, b.outer);
}

EigenResult solve_lambda(const ConeProblem& problem, const Tolerances& tol) {
  validate(problem);
  validate(tol);
  EigenResult result;
  result.problem = problem;

  const Bracket b = find_bracket(problem, tol);
  const Mismatch g{problem, tol};

  if (b.seed_hit) {
    result.lambda = b.inner;
    result.bracket = {b.inner, b.inner};
  } else if (is_slit(problem.alpha)) {
    // Only the sign of the classification is available: bisect.
    double inner = b.inner, outer = b.outer;
    int it = 0;
    while (std::abs(outer - inner) > tol.lambda_tol) {
      if (++it > kMaxRootIterations) throw MaxIterations("bisection at alpha=pi");
      const double mid = 0.5 * (inner + outer);
      if (g(mid) > 0.0)
        inner = mid;
      else
        outer = mid;
    }
    result.iterations = it;
    result.lambda = 0.5 * (inner + outer);
    result.bracket = ordered(inner, outer);
  } else {
    const auto root = brent_root(g, b.inner, b.outer, b.g_inner, b.g_outer, tol.lambda_tol,
                                 kMaxRootIterations, [](double, double) { return false; });
    if (!root.converged) throw MaxIterations("root iteration budget exhausted");
    result.lambda = root.root;
    result.iterations = root.iterations;
    result.bracket = {root.lo, root.hi};
  }

  Tolerances sampling = tol;
  sampling.sample_step = std::min(tol.sample_step, problem.alpha / 2000.0);
  const auto traj = integrate_psi(result.lambda, problem.p, problem.n, sampling);
  if (traj.status == TrajectoryStatus::Failed) throw StepSizeUnderflow(traj.message);
  result.alpha_achieved = traj.alpha_star;
  result.residual_alpha = std::abs(traj.alpha_star - problem.alpha);
  try {
    result.residual_ode = second_order_residual(reconstruct_phi(traj), problem.p, problem.n);
  } catch (const GridTooCoarse&) {
    result.residual_ode = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

}  // namespace cone_spectra
