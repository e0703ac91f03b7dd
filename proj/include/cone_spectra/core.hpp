#pragma once

#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cone_spectra {

inline constexpr double kPi = std::numbers::pi;

// Valid range for the p-Laplace exponent.
inline constexpr double kMinP = 1.0 + 1e-6;
inline constexpr double kMaxP = 1e3;

// Error hierarchy. DomainError covers invalid input; NumericalError covers
// failures of an algorithm on valid input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class DegenerateDenominator : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class StepSizeUnderflow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class BracketNotFound : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class MaxIterations : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class NonMonotoneShootingMap : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class NoRoot : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class GridTooCoarse : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class NonPositiveQuantity : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class OutOfCone : public DomainError {
 public:
  using DomainError::DomainError;
};
class InsufficientData : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Which homogeneous solution is sought.
///
/// Fundamental: lambda > 0, u vanishes on the cone boundary and grows at
/// infinity. Exterior: lambda < 0, u vanishes on the boundary away from the
/// vertex and decays at infinity.
enum class Branch { Fundamental, Exterior };

std::string_view to_string(Branch branch);
Branch parse_branch(std::string_view text);

inline constexpr double branch_sign(Branch branch) {
  return branch == Branch::Fundamental ? 1.0 : -1.0;
}

/// The problem (p, n, alpha, branch). alpha is the half-aperture in radians.
struct ConeProblem {
  double p = 2.0;
  int n = 2;
  double alpha = kPi / 2;
  Branch branch = Branch::Fundamental;

  friend bool operator==(const ConeProblem&, const ConeProblem&) = default;
};

struct Tolerances {
  double lambda_tol = 1e-10;
  double alpha_tol = 1e-9;
  double ode_rel_tol = 1e-10;
  double ode_abs_tol = 1e-12;
  double psi_blowup_threshold = 1e8;
  double theta_start = 1e-7;
  // Spacing of the uniform angle samples recorded along a trajectory.
  double sample_step = 1e-3;

  /// Every field scaled for a tighter solve (used by self-convergence checks).
  Tolerances tightened(double factor) const;
};

/// Throws DomainError naming the violated invariant.
void validate(const Tolerances& tol);

/// Returns the problem unchanged when every invariant holds; throws
/// DomainError otherwise. At alpha = pi both branches need p > n - 1: the
/// slit is polar for smaller p and no solution exists.
const ConeProblem& validate(const ConeProblem& problem);

/// Validates (p, n) alone.
void validate_exponents(double p, int n);

/// True when alpha should be handled as the full-space-minus-slit endpoint.
inline bool is_slit(double alpha) { return alpha >= kPi; }

/// Limit value of the fundamental exponent at alpha = pi, 1 - (n - 1)/p.
inline double slit_fundamental_limit(double p, int n) {
  return 1.0 - (n - 1) / p;
}

}  // namespace cone_spectra
