#include "cone_spectra/asymptotics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "cone_spectra/eigensolver.hpp"

namespace cone_spectra {

namespace {

SweepRecord solve_one(double p, int n, Branch branch, double alpha, const Tolerances& tol) {
  SweepRecord rec;
  rec.alpha = alpha;
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto res = solve_lambda(ConeProblem{p, n, alpha, branch}, tol);
    rec.lambda = res.lambda;
    rec.residual_alpha = res.residual_alpha;
    rec.residual_ode = res.residual_ode;
    rec.ok = true;
  } catch (const DomainError& e) {
    rec.error = e.what();
    rec.error_kind = 1;
  } catch (const Error& e) {
    rec.error = e.what();
    rec.error_kind = 2;
  }
  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace

std::vector<SweepRecord> sweep(double p, int n, Branch branch, const std::vector<double>& alphas,
                               const Tolerances& tol, int threads) {
  std::vector<SweepRecord> out(alphas.size());
  if (alphas.empty()) return out;
  const int workers =
      std::clamp(threads, 1, static_cast<int>(std::min<std::size_t>(alphas.size(), 256)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < alphas.size(); i = next++)
      out[i] = solve_one(p, n, branch, alphas[i], tol);
  };
  if (workers == 1) {
    work();
    return out;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return out;
}

std::vector<double> geometric_gaps(double eps_min, double eps_max, int count) {
  if (!(eps_min > 0.0) || !(eps_max >= eps_min) || count < 1)
    throw DomainError("geometric gaps need 0 < eps_min <= eps_max and count >= 1");
  std::vector<double> alphas;
  alphas.reserve(static_cast<std::size_t>(count));
  const double lmin = std::log(eps_min), lmax = std::log(eps_max);
  for (int k = count - 1; k >= 0; --k) {
    const double t = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
    alphas.push_back(kPi - std::exp(lmin + t * (lmax - lmin)));
  }
  return alphas;
}

FitResult fit_exponent(std::vector<SweepRecord> records, double p, int n,
                       std::pair<double, double> window) {
  if (!(window.first > 0.0) || !(window.second > window.first))
    throw DomainError("fit window must satisfy 0 < eps_min < eps_max");
  FitResult fit;
  fit.law = theoretical_exponent(p, n);
  fit.theoretical_exponent = fit.law.exponent;
  fit.window = window;

  std::sort(records.begin(), records.end(),
            [](const SweepRecord& a, const SweepRecord& b) { return a.alpha < b.alpha; });
  std::vector<double> xs, ys;
  double eps_lo = INFINITY, eps_hi = 0.0;
  constexpr double slack = 1e-9;
  for (const auto& rec : records) {
    if (!rec.ok) continue;
    const double eps = kPi - rec.alpha;
    if (eps < window.first * (1 - slack) || eps > window.second * (1 + slack)) continue;
    double x = std::log(eps);
    double y = rec.lambda;
    switch (fit.law.kind) {
      case AsymptoticLaw::Kind::Gap:
        y -= fit.law.limit;
        break;
      case AsymptoticLaw::Kind::Value:
        break;
      case AsymptoticLaw::Kind::Logarithmic:
        x = std::log(-1.0 / std::log(eps));
        break;
    }
    if (!(y > 0.0)) {
      throw NonPositiveQuantity("measured " + std::string(to_string(fit.law.kind)) +
                                " quantity is not positive at alpha=" + std::to_string(rec.alpha));
    }
    xs.push_back(x);
    ys.push_back(std::log(y));
    eps_lo = std::min(eps_lo, eps);
    eps_hi = std::max(eps_hi, eps);
  }
  if (xs.size() < 4) throw InsufficientData("fit needs at least 4 records inside the window");
  if (eps_hi < 10.0 * eps_lo * (1 - slack))
    throw InsufficientData("records inside the window span less than one decade");

  const auto m = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd design(m, 2);
  design.col(0).setOnes();
  design.col(1) = Eigen::Map<const Eigen::VectorXd>(xs.data(), m);
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(ys.data(), m);
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd resid = rhs - design * coef;
  const double ss_res = resid.squaredNorm();
  const double ss_tot = (rhs.array() - rhs.mean()).square().sum();

  fit.fitted_exponent = coef(1);
  fit.fitted_prefactor = std::exp(coef(0));
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 0.0;
  fit.records_used = static_cast<int>(m);
  fit.flagged = fit.r_squared < 0.99;
  return fit;
}

}  // namespace cone_spectra
