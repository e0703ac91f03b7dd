#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cone_spectra/core.hpp"
#include "cone_spectra/reference.hpp"

namespace cone_spectra {

struct SweepRecord {
  double alpha = 0.0;
  double lambda = 0.0;
  double residual_alpha = 0.0;
  double residual_ode = 0.0;
  double wall_time = 0.0;  // seconds
  bool ok = false;
  std::string error;  // empty when ok
  // 1 for domain errors, 2 for numerical failures, 0 when ok
  int error_kind = 0;
};

/// One independent solve per alpha; failures are recorded per entry.
/// `threads` workers pull alphas from a shared counter; record order always
/// matches the input order.
std::vector<SweepRecord> sweep(double p, int n, Branch branch, const std::vector<double>& alphas,
                               const Tolerances& tol = {}, int threads = 1);

/// `count` angles pi - eps with eps log-spaced on [eps_min, eps_max],
/// returned in ascending alpha.
std::vector<double> geometric_gaps(double eps_min, double eps_max, int count);

struct FitResult {
  AsymptoticLaw law;
  double fitted_exponent = 0.0;
  double fitted_prefactor = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> window{1e-4, 1e-2};  // in pi - alpha
  double theoretical_exponent = 0.0;
  int records_used = 0;
  bool flagged = false;  // r_squared below 0.99
};

/// Least-squares fit of the law predicted by theoretical_exponent(p, n):
///   gap   log(lambda - lambda_1(pi)) vs log(pi - alpha)
///   value log(lambda)                vs log(pi - alpha)
///   log   log(lambda)                vs log(-1/log(pi - alpha))
/// over records with pi - alpha inside `window`.
/// Throws InsufficientData (fewer than 4 records or less than a decade) and
/// NonPositiveQuantity (gap <= 0 somewhere).
FitResult fit_exponent(std::vector<SweepRecord> records, double p, int n,
                       std::pair<double, double> window = {1e-4, 1e-2});

}  // namespace cone_spectra
