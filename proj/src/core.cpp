#include "cone_spectra/core.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace cone_spectra {

std::string_view to_string(Branch branch) {
  return branch == Branch::Fundamental ? "fundamental" : "exterior";
}

Branch parse_branch(std::string_view raw) {
  std::string text(raw);
  for (char& ch : text) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (text == "fundamental" || text == "f" || text == "1") return Branch::Fundamental;
  if (text == "exterior" || text == "e" || text == "2") return Branch::Exterior;
  throw DomainError("unknown branch '" + std::string(raw) +
                    "' (expected fundamental or exterior)");
}

Tolerances Tolerances::tightened(double factor) const {
  Tolerances t = *this;
  t.lambda_tol /= factor;
  t.alpha_tol /= factor;
  t.ode_rel_tol /= factor;
  t.ode_abs_tol /= factor;
  return t;
}

void validate(const Tolerances& tol) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError(std::string(name) + " must be positive and finite");
  };
  positive(tol.lambda_tol, "lambda_tol");
  positive(tol.alpha_tol, "alpha_tol");
  positive(tol.ode_rel_tol, "ode_rel_tol");
  positive(tol.ode_abs_tol, "ode_abs_tol");
  positive(tol.psi_blowup_threshold, "psi_blowup_threshold");
  positive(tol.theta_start, "theta_start");
  positive(tol.sample_step, "sample_step");
  if (tol.theta_start > 1e-3)
    throw DomainError("theta_start must not exceed 1e-3");
  if (tol.psi_blowup_threshold < 1e6)
    throw DomainError("psi_blowup_threshold must be at least 1e6");
}

void validate_exponents(double p, int n) {
  if (!std::isfinite(p) || !(p > 1.0))
    throw DomainError("p must exceed 1");
  if (p < kMinP || p > kMaxP) {
    std::ostringstream os;
    os << "p must lie in [" << kMinP << ", " << kMaxP << "]";
    throw DomainError(os.str());
  }
  if (n < 2) throw DomainError("n must be at least 2");
}

const ConeProblem& validate(const ConeProblem& problem) {
  validate_exponents(problem.p, problem.n);
  if (!std::isfinite(problem.alpha) || !(problem.alpha > 0.0))
    throw DomainError("alpha must exceed 0");
  if (problem.alpha > kPi)
    throw DomainError("alpha must not exceed pi");
  if (is_slit(problem.alpha) && !(problem.p > problem.n - 1)) {
    throw DomainError(problem.branch == Branch::Fundamental
                          ? "alpha=pi requires p > n-1 for Fundamental branch"
                          : "alpha=pi requires p > n-1 for Exterior branch");
  }
  return problem;
}

}  // namespace cone_spectra
