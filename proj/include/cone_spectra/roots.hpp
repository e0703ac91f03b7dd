#pragma once

#include <cmath>
#include <limits>
#include <utility>

namespace cone_spectra {

struct RootBracket {
  double root = 0.0;
  double f_root = 0.0;
  // Final bracket; f changes sign across it unless f_root == 0.
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Brent's method on [a, b] with f(a), f(b) of opposite sign (or one zero).
/// Stops when the bracket is narrower than 2 (4 eps |x| + x_tol) or when
/// `done(x, fx)` returns true for the current best estimate.
template <typename F, typename Done>
RootBracket brent_root(F&& f, double a, double b, double fa, double fb, double x_tol,
                       int max_iter, Done&& done) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  RootBracket out;
  if (fa == 0.0) {
    out = {a, 0.0, a, a, 0, true};
    return out;
  }
  if (fb == 0.0) {
    out = {b, 0.0, b, b, 0, true};
    return out;
  }
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 1; iter <= max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * x_tol;
    const double xm = 0.5 * (c - b);
    out.iterations = iter;
    if (std::abs(xm) <= tol1 || fb == 0.0 || done(b, fb)) {
      out.root = b;
      out.f_root = fb;
      out.lo = std::min(b, c);
      out.hi = std::max(b, c);
      out.converged = true;
      return out;
    }
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic interpolation, or secant when only two points.
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  out.root = b;
  out.f_root = fb;
  out.lo = std::min(b, c);
  out.hi = std::max(b, c);
  out.converged = false;
  return out;
}

template <typename F>
RootBracket brent_root(F&& f, double a, double b, double x_tol, int max_iter = 200) {
  const double fa = f(a);
  const double fb = f(b);
  return brent_root(std::forward<F>(f), a, b, fa, fb, x_tol, max_iter,
                    [](double, double) { return false; });
}

}  // namespace cone_spectra
