#pragma once

#include <utility>

#include "cone_spectra/core.hpp"

namespace cone_spectra {

struct EigenResult {
  ConeProblem problem;
  double lambda = 0.0;
  double alpha_achieved = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
  int iterations = 0;
  double residual_alpha = 0.0;  // |alpha*(lambda) - alpha|
  double residual_ode = 0.0;    // second_order_residual of the final profile
};

/// (lo, hi) with the root of alpha*(lambda) = alpha between them, found by
/// geometric expansion from lambda = +1 (Fundamental) or -1 (Exterior).
/// At alpha = pi the shooting map is replaced by classify_at_pi.
/// Throws BracketNotFound after 60 expansions and NonMonotoneShootingMap if
/// the sampled map moves the wrong way.
std::pair<double, double> bracket_lambda(const ConeProblem& problem, const Tolerances& tol = {});

/// Exponent lambda with alpha*(lambda) = alpha on the requested branch.
EigenResult solve_lambda(const ConeProblem& problem, const Tolerances& tol = {});

}  // namespace cone_spectra
