#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace cone_spectra {

/// Dormand-Prince 5(4) embedded pair with FSAL, 4th-order dense output and a
/// PI step-size controller. Works on fixed-size Eigen column vectors.
///
///   DormandPrince<double, 2> rk(rtol, atol);
///   rk.start(rhs, t0, y0, h0);
///   while (...) { if (rk.try_step(rhs, h)) { ... rk.dense(t) ... } }
template <typename Scalar, int Dim>
class DormandPrince {
 public:
  using State = Eigen::Matrix<Scalar, Dim, 1>;

  DormandPrince(Scalar rel_tol, Scalar abs_tol) : rtol_(rel_tol), atol_(abs_tol) {}

  template <typename Rhs>
  void start(Rhs&& rhs, Scalar t0, const State& y0) {
    t_ = t0;
    y_ = y0;
    k1_ = rhs(t_, y_);
    err_prev_ = Scalar(1e-4);
  }

  Scalar t() const { return t_; }
  const State& y() const { return y_; }
  const State& dydt() const { return k1_; }
  Scalar t_prev() const { return t_prev_; }
  const State& y_prev() const { return y_prev_; }

  /// Attempts one step of size h. On acceptance the state advances and the
  /// dense-output polynomial covers [t_prev(), t()]. Returns the suggested
  /// next step in `h_next` either way.
  template <typename Rhs>
  bool try_step(Rhs&& rhs, Scalar h, Scalar& h_next) {
    constexpr Scalar a21 = Scalar(1) / 5;
    constexpr Scalar a31 = Scalar(3) / 40, a32 = Scalar(9) / 40;
    constexpr Scalar a41 = Scalar(44) / 45, a42 = Scalar(-56) / 15, a43 = Scalar(32) / 9;
    constexpr Scalar a51 = Scalar(19372) / 6561, a52 = Scalar(-25360) / 2187,
                     a53 = Scalar(64448) / 6561, a54 = Scalar(-212) / 729;
    constexpr Scalar a61 = Scalar(9017) / 3168, a62 = Scalar(-355) / 33,
                     a63 = Scalar(46732) / 5247, a64 = Scalar(49) / 176,
                     a65 = Scalar(-5103) / 18656;
    constexpr Scalar a71 = Scalar(35) / 384, a73 = Scalar(500) / 1113,
                     a74 = Scalar(125) / 192, a75 = Scalar(-2187) / 6784,
                     a76 = Scalar(11) / 84;
    constexpr Scalar c2 = Scalar(1) / 5, c3 = Scalar(3) / 10, c4 = Scalar(4) / 5,
                     c5 = Scalar(8) / 9;
    constexpr Scalar e1 = Scalar(71) / 57600, e3 = Scalar(-71) / 16695,
                     e4 = Scalar(71) / 1920, e5 = Scalar(-17253) / 339200,
                     e6 = Scalar(22) / 525, e7 = Scalar(-1) / 40;

    const State k2 = rhs(t_ + c2 * h, State(y_ + h * a21 * k1_));
    const State k3 = rhs(t_ + c3 * h, State(y_ + h * (a31 * k1_ + a32 * k2)));
    const State k4 = rhs(t_ + c4 * h, State(y_ + h * (a41 * k1_ + a42 * k2 + a43 * k3)));
    const State k5 =
        rhs(t_ + c5 * h, State(y_ + h * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4)));
    const State k6 = rhs(
        t_ + h, State(y_ + h * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
    const State y_new =
        y_ + h * (a71 * k1_ + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const State k7 = rhs(t_ + h, y_new);

    const State err_vec =
        h * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const State scale =
        (atol_ + rtol_ * y_.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array()).matrix();
    const Scalar err = std::sqrt((err_vec.cwiseQuotient(scale)).squaredNorm() / Dim);

    using std::isfinite;
    if (!isfinite(err) || !y_new.allFinite()) {
      h_next = h * Scalar(0.25);
      return false;
    }

    constexpr Scalar safety = Scalar(0.9);
    constexpr Scalar alpha = Scalar(0.7) / 5, beta = Scalar(0.4) / 5;
    if (err <= Scalar(1)) {
      const Scalar e = std::max(err, Scalar(1e-10));
      Scalar factor = safety * std::pow(e, -alpha) * std::pow(err_prev_, beta);
      factor = std::clamp(factor, Scalar(0.2), Scalar(5));
      h_next = h * factor;
      err_prev_ = std::max(err, Scalar(1e-4));

      constexpr Scalar d1 = Scalar(-12715105075.0) / Scalar(11282082432.0),
                       d3 = Scalar(87487479700.0) / Scalar(32700410799.0),
                       d4 = Scalar(-10690763975.0) / Scalar(1880347072.0),
                       d5 = Scalar(701980252875.0) / Scalar(199316789632.0),
                       d6 = Scalar(-1453857185.0) / Scalar(822651844.0),
                       d7 = Scalar(69997945.0) / Scalar(29380423.0);
      r1_ = y_;
      r2_ = y_new - y_;
      r3_ = h * k1_ - r2_;
      r4_ = r2_ - h * k7 - r3_;
      r5_ = h * (d1 * k1_ + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

      t_prev_ = t_;
      y_prev_ = y_;
      h_last_ = h;
      t_ += h;
      y_ = y_new;
      k1_ = k7;
      return true;
    }
    const Scalar factor =
        std::max(Scalar(0.2), safety * std::pow(err, -alpha));
    h_next = h * factor;
    return false;
  }

  /// Dense output on the last accepted step, t in [t_prev(), t()].
  State dense(Scalar t) const {
    const Scalar s = (t - t_prev_) / h_last_;
    const Scalar s1 = Scalar(1) - s;
    return r1_ + s * (r2_ + s1 * (r3_ + s * (r4_ + s1 * r5_)));
  }

 private:
  Scalar rtol_, atol_;
  Scalar t_{0}, t_prev_{0}, h_last_{1};
  State y_, y_prev_, k1_;
  State r1_, r2_, r3_, r4_, r5_;
  Scalar err_prev_{1e-4};
};

}  // namespace cone_spectra
