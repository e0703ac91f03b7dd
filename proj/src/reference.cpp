#include "cone_spectra/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cone_spectra {

namespace {

bool nearly(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

double lambda_closed_form_2d(double p, double alpha, Branch branch) {
  validate_exponents(p, 2);
  if (!(alpha > 0.0) || alpha > kPi) throw DomainError("alpha must lie in (0, pi]");

  const double target = 2.0 * alpha / kPi;
  const double root_of_radicand = (p - 2.0) / (p - 1.0);
  // g is decreasing in lambda on the fundamental branch and increasing on the
  // exterior branch; both blow up at the radicand boundary and vanish at
  // infinity.
  const bool fundamental = branch == Branch::Fundamental;
  const double edge = fundamental ? std::max(0.0, root_of_radicand)
                                  : std::min(0.0, root_of_radicand);
  const double dir = fundamental ? 1.0 : -1.0;
  auto g = [&](double lam) { return planar_lhs(lam, p, branch) - target; };

  // Bracket [near, far] along the admissible ray: g(near) > 0 > g(far).
  double far = edge + dir;
  for (int k = 0; g(far) > 0.0; ++k) {
    if (k > 200) throw NoRoot("planar relation: no far bracket");
    far = edge + (far - edge) * 2.0;
  }
  double near = edge + (far - edge) * 0.5;
  for (int k = 0; g(near) <= 0.0; ++k) {
    if (k > 1000) throw NoRoot("planar relation: no near bracket");
    near = edge + (near - edge) * 0.5;
  }

  double lo = near, hi = far;  // g(lo) > 0, g(hi) < 0
  double lam = 0.5 * (lo + hi);
  for (int it = 0; it < 500; ++it) {
    const double gv = g(lam);
    if (gv == 0.0) return lam;
    if (gv > 0.0)
      lo = lam;
    else
      hi = lam;
    const double dg = planar_lhs_derivative(lam, p);
    double next = lam - gv / dg;
    const bool inside = (next - lo) * (next - hi) < 0.0;
    if (!inside || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - lam) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(lam) ||
        std::abs(hi - lo) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(lam))
      return next;
    lam = next;
  }
  throw NoRoot("planar relation: Newton iteration did not settle");
}

double planar_exterior_half_space(double p) {
  return (p - 3.0 - 2.0 * std::sqrt(p * p - 3.0 * p + 3.0)) / (3.0 * (p - 1.0));
}

double planar_exterior_slit(double p) {
  return (7.0 * p - 16.0 - std::sqrt(81.0 * p * p - 288.0 * p + 288.0)) / (16.0 * (p - 1.0));
}

std::vector<AnchorValue> anchor_table(double p, int n) {
  validate_exponents(p, n);
  std::vector<AnchorValue> out;
  auto add = [&](double alpha, Branch branch, double value, std::string provenance) {
    for (const auto& a : out)
      if (a.problem.alpha == alpha && a.problem.branch == branch) return;
    out.push_back({ConeProblem{p, n, alpha, branch}, value, std::move(provenance)});
  };
  const double half = kPi / 2;

  add(half, Branch::Fundamental, 1.0, "half-space: x1 = r cos(theta) is p-harmonic");
  if (n == 2) {
    add(half, Branch::Exterior, planar_exterior_half_space(p),
        "planar closed form at alpha = pi/2");
  }
  if (p > n - 1) {
    add(kPi, Branch::Fundamental, slit_fundamental_limit(p, n),
        "slit limit lambda_1(pi) = 1 - (n-1)/p");
  }
  if (n == 2) {
    add(kPi, Branch::Exterior, planar_exterior_slit(p), "planar closed form at alpha = pi");
  }
  if (nearly(p, 2.0)) add(half, Branch::Exterior, 1.0 - n, "Kelvin transform (p = 2)");
  if (nearly(p, static_cast<double>(n)))
    add(half, Branch::Exterior, -1.0, "conformal invariance (p = n)");
  if (nearly(p, (4.0 * n - 2.0) / 3.0)) {
    add(kPi, Branch::Exterior, -(n + 1.0) / (2.0 * (4.0 * n - 5.0)),
        "slit solution r^(-beta/2) cos(theta/2)^beta");
  }
  return out;
}

std::string_view to_string(AsymptoticLaw::Kind kind) {
  switch (kind) {
    case AsymptoticLaw::Kind::Gap:
      return "gap";
    case AsymptoticLaw::Kind::Value:
      return "value";
    case AsymptoticLaw::Kind::Logarithmic:
      return "log";
  }
  return "gap";
}

AsymptoticLaw theoretical_exponent(double p, int n) {
  validate_exponents(p, n);
  AsymptoticLaw law;
  const double critical = n - 1.0;
  if (nearly(p, critical)) {
    law.kind = AsymptoticLaw::Kind::Logarithmic;
    law.exponent = 1.0;
  } else if (p > critical) {
    law.kind = AsymptoticLaw::Kind::Gap;
    law.exponent = (p + 1.0 - n) / (p - 1.0);
    law.limit = slit_fundamental_limit(p, n);
  } else {
    law.kind = AsymptoticLaw::Kind::Value;
    law.exponent = (n - 1.0 - p) / (p - 1.0);
  }
  return law;
}

}  // namespace cone_spectra
