#include <doctest.h>

#include "cone_spectra/core.hpp"
#include "generators.hpp"

using namespace cone_spectra;

TEST_CASE("validate accepts a plain problem and returns it unchanged") {
  const ConeProblem pr{2.0, 3, kPi / 2, Branch::Fundamental};
  CHECK(validate(pr) == pr);
}

TEST_CASE("validate rejects bad inputs with the violated invariant") {
  CHECK_THROWS_WITH_AS(validate(ConeProblem{1.5, 3, kPi, Branch::Fundamental}),
                       doctest::Contains("p > n-1"), DomainError);
  CHECK_THROWS_AS(validate(ConeProblem{2.0, 2, 0.0, Branch::Fundamental}), DomainError);
  CHECK_THROWS_AS(validate(ConeProblem{2.0, 2, kPi + 1e-9, Branch::Fundamental}), DomainError);
  CHECK_THROWS_AS(validate(ConeProblem{1.0, 2, 1.0, Branch::Fundamental}), DomainError);
  CHECK_THROWS_AS(validate(ConeProblem{1e4, 2, 1.0, Branch::Fundamental}), DomainError);
  CHECK_THROWS_AS(validate(ConeProblem{2.0, 1, 1.0, Branch::Exterior}), DomainError);
  CHECK_THROWS_AS(validate(ConeProblem{std::nan(""), 3, 1.0, Branch::Exterior}), DomainError);
  CHECK_THROWS_AS(validate(ConeProblem{2.0, 3, kPi, Branch::Exterior}), DomainError);
}

TEST_CASE("alpha = pi is admissible exactly when p > n - 1") {
  CHECK_NOTHROW(validate(ConeProblem{3.0, 3, kPi, Branch::Fundamental}));
  CHECK_NOTHROW(validate(ConeProblem{10.0 / 3, 3, kPi, Branch::Exterior}));
  CHECK_THROWS_AS(validate(ConeProblem{2.0, 3, kPi, Branch::Fundamental}), DomainError);
}

TEST_CASE("validate is idempotent on random problems") {
  testing::Gen gen(11);
  for (int k = 0; k < 500; ++k) {
    const ConeProblem pr{gen.uniform(0.5, 12.0), gen.integer(0, 7), gen.uniform(-0.5, 3.5),
                         gen.integer(0, 1) ? Branch::Fundamental : Branch::Exterior};
    bool ok = true;
    try {
      validate(pr);
    } catch (const DomainError&) {
      ok = false;
    }
    if (ok) CHECK(validate(validate(pr)) == pr);
  }
}

TEST_CASE("tolerances") {
  CHECK_NOTHROW(validate(Tolerances{}));
  Tolerances t;
  t.psi_blowup_threshold = 1e5;
  CHECK_THROWS_AS(validate(t), DomainError);
  t = {};
  t.ode_abs_tol = 0.0;
  CHECK_THROWS_AS(validate(t), DomainError);
  t = {};
  t.theta_start = 1e-2;
  CHECK_THROWS_AS(validate(t), DomainError);
  const Tolerances tight = Tolerances{}.tightened(10.0);
  CHECK(tight.lambda_tol == doctest::Approx(1e-11));
  CHECK(tight.alpha_tol == doctest::Approx(1e-10));
  CHECK_NOTHROW(validate(tight));
}

TEST_CASE("branch helpers") {
  CHECK(parse_branch("fundamental") == Branch::Fundamental);
  CHECK(parse_branch("Exterior") == Branch::Exterior);
  CHECK(parse_branch("2") == Branch::Exterior);
  CHECK_THROWS_AS(parse_branch("middle"), DomainError);
  CHECK(branch_sign(Branch::Exterior) == -1.0);
  CHECK(to_string(Branch::Fundamental) == "fundamental");
  CHECK(slit_fundamental_limit(4.0, 3) == doctest::Approx(0.5));
}

TEST_CASE("error hierarchy separates domain and numerical failures") {
  CHECK_THROWS_AS(throw BracketNotFound("x"), NumericalError);
  CHECK_THROWS_AS(throw OutOfCone("x"), DomainError);
  CHECK_THROWS_AS(throw NonConvergence("x"), Error);
}
