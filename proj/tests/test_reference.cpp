#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cone_spectra/reference.hpp"
#include "generators.hpp"

using namespace cone_spectra;

TEST_CASE("planar closed form examples") {
  CHECK(lambda_closed_form_2d(2.0, kPi / 2, Branch::Fundamental) == doctest::Approx(1.0));
  CHECK(lambda_closed_form_2d(4.0, kPi, Branch::Fundamental) == doctest::Approx(0.75));
  CHECK(lambda_closed_form_2d(3.0, kPi / 2, Branch::Exterior) ==
        doctest::Approx(-std::sqrt(3.0) / 3).epsilon(1e-12));
  CHECK(lambda_closed_form_2d(2.0, kPi / 2, Branch::Exterior) == doctest::Approx(-1.0));
  CHECK(lambda_closed_form_2d(2.0, kPi, Branch::Exterior) == doctest::Approx(-0.5));
  CHECK(planar_exterior_half_space(3.0) == doctest::Approx(-std::sqrt(3.0) / 3));
  CHECK(planar_exterior_slit(2.0) == doctest::Approx(-0.5));
}

TEST_CASE("planar closed form round trip") {
  testing::Gen gen(2);
  for (int k = 0; k < 400; ++k) {
    const double p = gen.uniform(1.05, 20.0), alpha = gen.uniform(0.05, kPi);
    for (Branch b : {Branch::Fundamental, Branch::Exterior}) {
      const double lam = lambda_closed_form_2d(p, alpha, b);
      CHECK(planar_radicand(lam, p) > 0.0);
      CHECK(planar_lhs(lam, p, b) == doctest::Approx(2 * alpha / kPi).epsilon(1e-12));
      CHECK(lam * branch_sign(b) > 0.0);
    }
  }
}

TEST_CASE("anchor table contents") {
  auto has = [](const std::vector<AnchorValue>& t, double alpha, Branch b, double value) {
    return std::any_of(t.begin(), t.end(), [&](const AnchorValue& a) {
      return std::abs(a.problem.alpha - alpha) < 1e-15 && a.problem.branch == b &&
             std::abs(a.lambda_exact - value) < 1e-14;
    });
  };
  const auto t23 = anchor_table(2.0, 3);
  CHECK(has(t23, kPi / 2, Branch::Fundamental, 1.0));
  CHECK(has(t23, kPi / 2, Branch::Exterior, -2.0));

  const auto t3 = anchor_table(10.0 / 3, 3);
  CHECK(has(t3, kPi, Branch::Exterior, -2.0 / 7));
  CHECK(has(t3, kPi, Branch::Fundamental, 0.4));

  const auto t15 = anchor_table(1.2, 5);
  REQUIRE(t15.size() == 1);
  CHECK(has(t15, kPi / 2, Branch::Fundamental, 1.0));

  const auto t33 = anchor_table(3.0, 3);
  CHECK(has(t33, kPi / 2, Branch::Exterior, -1.0));
  for (const auto& a : anchor_table(2.0, 2)) {
    CHECK(std::isfinite(a.lambda_exact));
    CHECK(!a.provenance.empty());
  }
}

TEST_CASE("theoretical exponents") {
  auto g = theoretical_exponent(3.0, 3);
  CHECK(g.kind == AsymptoticLaw::Kind::Gap);
  CHECK(g.exponent == doctest::Approx(0.5));
  CHECK(g.limit == doctest::Approx(1.0 / 3));
  auto v = theoretical_exponent(2.0, 4);
  CHECK(v.kind == AsymptoticLaw::Kind::Value);
  CHECK(v.exponent == doctest::Approx(1.0));
  CHECK(theoretical_exponent(2.0, 3).kind == AsymptoticLaw::Kind::Logarithmic);
  CHECK(to_string(AsymptoticLaw::Kind::Logarithmic) == "log");
}
