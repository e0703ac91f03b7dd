#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cone_spectra/core.hpp"

namespace cone_spectra {

/// lambda^2 + lambda (2 - p)/(p - 1); the planar closed form needs it positive.
template <typename Scalar>
Scalar planar_radicand(Scalar lambda, Scalar p) {
  return lambda * lambda + lambda * (Scalar(2) - p) / (p - Scalar(1));
}

/// Left-hand side of the planar (n = 2) relation
///   +-1 - (lambda - 1) / sqrt(lambda^2 + lambda (2-p)/(p-1)) = 2 alpha / pi,
/// with +1 on the fundamental branch and -1 on the exterior branch.
template <typename Scalar>
Scalar planar_lhs(Scalar lambda, Scalar p, Branch branch) {
  using std::sqrt;
  const Scalar sign = branch == Branch::Fundamental ? Scalar(1) : Scalar(-1);
  return sign - (lambda - Scalar(1)) / sqrt(planar_radicand(lambda, p));
}

template <typename Scalar>
Scalar planar_lhs_derivative(Scalar lambda, Scalar p) {
  using std::sqrt;
  const Scalar r = planar_radicand(lambda, p);
  const Scalar dr = Scalar(2) * lambda + (Scalar(2) - p) / (p - Scalar(1));
  return -(Scalar(2) * r - (lambda - Scalar(1)) * dr) / (Scalar(2) * r * sqrt(r));
}

/// Exact lambda for n = 2 by safeguarded Newton on the planar relation.
/// Throws NoRoot if no admissible root is found.
double lambda_closed_form_2d(double p, double alpha, Branch branch);

/// Explicit values of the planar relation at the half-space and slit.
double planar_exterior_half_space(double p);  // (p-3-2 sqrt(p^2-3p+3)) / (3(p-1))
double planar_exterior_slit(double p);        // (7p-16-sqrt(81p^2-288p+288)) / (16(p-1))

struct AnchorValue {
  ConeProblem problem;
  double lambda_exact = 0.0;
  std::string provenance;
};

/// Every exact value known for (p, n). See the README for the list.
std::vector<AnchorValue> anchor_table(double p, int n);

/// How lambda_1(alpha) approaches its limit as alpha -> pi.
struct AsymptoticLaw {
  enum class Kind {
    Gap,          // lambda - (1 - (n-1)/p) ~ (pi - alpha)^e,  p > n - 1
    Value,        // lambda ~ (pi - alpha)^e,                  p < n - 1
    Logarithmic,  // lambda ~ (-1/log(pi - alpha))^e, e = 1,   p = n - 1
  };
  Kind kind = Kind::Gap;
  double exponent = 0.0;
  double limit = 0.0;  // lambda_1(pi) for Gap, 0 otherwise
};

std::string_view to_string(AsymptoticLaw::Kind kind);

AsymptoticLaw theoretical_exponent(double p, int n);

}  // namespace cone_spectra
