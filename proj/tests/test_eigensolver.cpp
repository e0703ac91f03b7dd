#include <doctest.h>

#include <cmath>

#include "cone_spectra/eigensolver.hpp"
#include "cone_spectra/reference.hpp"
#include "cone_spectra/shooting.hpp"

using namespace cone_spectra;

TEST_CASE("bracket examples") {
  for (int n : {2, 3, 6})
    for (double p : {1.5, 3.0}) {
      const auto [lo, hi] = bracket_lambda({p, n, kPi / 2, Branch::Fundamental}, {});
      CHECK(lo <= 1.0);
      CHECK(hi >= 1.0);
    }
  const auto [lo, hi] = bracket_lambda({2.0, 4, kPi / 2, Branch::Exterior}, {});
  CHECK(lo <= -3.0);
  CHECK(hi >= -3.0);
  CHECK_THROWS_AS(bracket_lambda({2.0, 4, kPi, Branch::Fundamental}, {}), DomainError);
}

TEST_CASE("solve examples") {
  CHECK(std::abs(solve_lambda({3.7, 6, kPi / 2, Branch::Fundamental}).lambda - 1.0) < 1e-8);
  CHECK(std::abs(solve_lambda({3.0, 3, kPi / 2, Branch::Exterior}).lambda + 1.0) < 1e-6);
  CHECK(std::abs(solve_lambda({2.0, 2, kPi, Branch::Exterior}).lambda + 0.5) < 1e-6);
  CHECK(std::abs(solve_lambda({2.0, 2, kPi, Branch::Fundamental}).lambda - 0.5) < 1e-6);
}

TEST_CASE("result invariants and round trip") {
  const Tolerances tol;
  for (double p : {1.5, 2.0, 4.0})
    for (int n : {2, 3, 5})
      for (double alpha : {0.4, 1.1, 2.3, 3.0})
        for (Branch b : {Branch::Fundamental, Branch::Exterior}) {
          const auto r = solve_lambda({p, n, alpha, b}, tol);
          CAPTURE(p);
          CAPTURE(n);
          CAPTURE(alpha);
          CHECK(r.lambda * branch_sign(b) > 0.0);
          CHECK(r.residual_alpha <= tol.alpha_tol);
          CHECK(r.bracket.first <= r.lambda);
          CHECK(r.bracket.second >= r.lambda);
          CHECK(std::abs(alpha_star(r.lambda, p, n, tol) - alpha) <= tol.alpha_tol);
        }
}

TEST_CASE("planar agreement with the closed form") {
  for (double p : {1.5, 2.0, 3.0, 5.0})
    for (double alpha : {0.3, 0.8, kPi / 2, 2.0, 2.8, 3.1})
      for (Branch b : {Branch::Fundamental, Branch::Exterior}) {
        const double got = solve_lambda({p, 2, alpha, b}).lambda;
        CHECK(std::abs(got - lambda_closed_form_2d(p, alpha, b)) < 1e-6);
      }
}

TEST_CASE("monotone in alpha") {
  for (const auto& [p, n] : {std::pair{2.0, 3}, std::pair{3.0, 3}, std::pair{5.0, 4}}) {
    double f_prev = INFINITY, e_prev = -INFINITY;
    for (int k = 1; k <= 10; ++k) {
      const double alpha = 0.3 * k;
      const double f = solve_lambda({p, n, alpha, Branch::Fundamental}).lambda;
      const double e = solve_lambda({p, n, alpha, Branch::Exterior}).lambda;
      CHECK(f < f_prev);
      CHECK(e > e_prev);
      f_prev = f;
      e_prev = e;
    }
  }
}

TEST_CASE("self-convergence under tolerance tightening") {
  const Tolerances tol;
  for (const ConeProblem pr : {ConeProblem{3.0, 3, 2.0, Branch::Fundamental},
                               ConeProblem{2.0, 4, 1.0, Branch::Exterior},
                               ConeProblem{1.5, 2, 2.8, Branch::Fundamental},
                               ConeProblem{4.0, 3, kPi, Branch::Fundamental}}) {
    const double a = solve_lambda(pr, tol).lambda;
    const double b = solve_lambda(pr, tol.tightened(10)).lambda;
    CHECK(std::abs(a - b) < 10 * tol.lambda_tol);
  }
}

TEST_CASE("slit endpoint returns the limit value") {
  for (const auto& [p, n] : {std::pair{3.0, 3}, std::pair{4.0, 3}, std::pair{10.0, 5},
                             std::pair{1.5, 2}}) {
    const auto r = solve_lambda({p, n, kPi, Branch::Fundamental});
    CHECK(std::abs(r.lambda - slit_fundamental_limit(p, n)) < 1e-9);
  }
}
