#include <doctest.h>

#include <cmath>

#include "cone_spectra/eigensolver.hpp"
#include "cone_spectra/profile.hpp"
#include "cone_spectra/shooting.hpp"

using namespace cone_spectra;

namespace {
Profile profile_of(double lambda, double p, int n, Tolerances tol = {}) {
  return reconstruct_phi(integrate_psi(lambda, p, n, tol));
}
}  // namespace

TEST_CASE("reconstruction matches exact profiles") {
  const auto cosine = profile_of(1.0, 2.0, 3);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < cosine.theta.size(); ++i)
    worst = std::max(worst, std::abs(cosine.phi[i] - std::cos(cosine.theta[i])));
  CHECK(worst < 1e-7);

  const auto slit = profile_of(-2.0 / 7, 10.0 / 3, 3);
  worst = 0.0;
  for (Eigen::Index i = 0; i < slit.theta.size(); ++i) {
    if (slit.theta[i] > kPi - 0.01) continue;
    worst = std::max(worst, std::abs(slit.phi[i] - std::pow(std::cos(slit.theta[i] / 2), 4.0 / 7)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("profile invariants") {
  for (const ConeProblem pr : {ConeProblem{3.0, 3, 2.0, Branch::Fundamental},
                               ConeProblem{2.0, 4, 1.0, Branch::Exterior},
                               ConeProblem{5.0, 2, 2.9, Branch::Exterior}}) {
    const double lam = solve_lambda(pr).lambda;
    const auto prof = profile_of(lam, pr.p, pr.n);
    CHECK(std::abs(prof.phi[0] - 1.0) < 1e-9);
    for (Eigen::Index i = 1; i < prof.phi.size(); ++i) {
      CHECK(prof.phi[i] < prof.phi[i - 1]);
      CHECK(prof.phi[i] > 0.0);
    }
    CHECK(eval_phi(prof, prof.alpha) == 0.0);
    CHECK(eval_phi(prof, prof.alpha - 1e-6) < 1e-4);
    // interpolant stays monotone between nodes
    double prev = 2.0;
    for (int k = 0; k <= 2000; ++k) {
      const double v = eval_phi(prof, prof.alpha * k / 2000.0);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("eval_u") {
  const auto prof = profile_of(1.0, 2.0, 3);
  CHECK(eval_u(prof, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (double th : {0.0, 0.3, 1.0, 1.5})
    for (double r : {0.5, 1.0, 3.0}) CHECK(std::abs(eval_u(prof, r, th) - r * std::cos(th)) < 1e-7);
  const auto ext = profile_of(-1.0, 3.0, 3);
  for (double t : {0.1, 2.0, 10.0})
    for (double th : {0.2, 0.9})
      CHECK(eval_u(ext, t * 1.7, th) ==
            doctest::Approx(std::pow(t, -1.0) * eval_u(ext, 1.7, th)).epsilon(1e-14));
  CHECK(eval_u(ext, 1e8, 0.0) < 1e-7);
  CHECK_THROWS_AS(eval_u(prof, 1.0, prof.alpha + 0.1), OutOfCone);
  CHECK_THROWS_AS(eval_u(prof, 0.0, 0.1), DomainError);
}

TEST_CASE("second-order residual") {
  const auto exact = profile_of(1.0, 2.0, 3);
  CHECK(second_order_residual(exact, 2.0, 3) <= 1e-6);

  const auto r = solve_lambda({3.0, 3, 2.0, Branch::Fundamental});
  CHECK(r.residual_ode <= 1e-5);

  // A linear perturbation of phi is detected well above the exact-profile level.
  Profile bent = exact;
  bent.phi.array() += 1e-3 * bent.theta.array();
  bent.dphi.array() += 1e-3;
  CHECK(second_order_residual(bent, 2.0, 3) >= 1e-3);

  // O(h^2) decay under grid refinement
  Tolerances coarse, fine;
  coarse.sample_step = 2e-3;
  fine.sample_step = 1e-3;
  const double rc = second_order_residual(profile_of(r.lambda, 3.0, 3, coarse), 3.0, 3);
  const double rf = second_order_residual(profile_of(r.lambda, 3.0, 3, fine), 3.0, 3);
  CHECK(rc / rf > 3.0);
  CHECK(rc / rf < 5.0);

  Tolerances sparse;
  sparse.sample_step = 0.1;
  CHECK_THROWS_AS(second_order_residual(profile_of(1.0, 2.0, 3, sparse), 2.0, 3), GridTooCoarse);
}
