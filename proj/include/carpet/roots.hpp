#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "carpet/errors.hpp"
#include "carpet/grid.hpp"

namespace carpet {

/// Bisection on [a, b] for a sign change of f. Stops when the bracket is narrower than tol
/// or f hits zero exactly.
template <typename F>
double bisect(F&& f, double a, double b, double tol = 1e-12, int max_iter = 400) {
  double fa = f(a);
  const double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa < 0.0) == (fb < 0.0)) {
    throw Error(ErrorKind::BadBracket, "bisect: no sign change on [" + std::to_string(a) + ", " +
                                           std::to_string(b) + "]");
  }
  for (int it = 0; it < max_iter && std::abs(b - a) > tol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// All roots of f located by sign changes over the (sorted) sample points, each refined by bisection.
template <typename F>
std::vector<double> scan_roots(F&& f, const Vector& samples, double tol = 1e-12) {
  std::vector<double> roots;
  double prev_x = samples(0);
  double prev_f = f(prev_x);
  if (prev_f == 0.0) roots.push_back(prev_x);
  for (Index i = 1; i < samples.size(); ++i) {
    const double x = samples(i);
    const double fx = f(x);
    if (fx == 0.0) {
      roots.push_back(x);
    } else if (prev_f != 0.0 && (prev_f < 0.0) != (fx < 0.0)) {
      roots.push_back(bisect(f, prev_x, x, tol));
    }
    prev_x = x;
    prev_f = fx;
  }
  return roots;
}

namespace detail {
inline constexpr std::array<double, 5> kGaussNodes = {0.0, 0.5384693101056831, -0.5384693101056831,
                                                       0.9061798459386640, -0.9061798459386640};
inline constexpr std::array<double, 5> kGaussWeights = {0.5688888888888889, 0.4786286704993665,
                                                         0.4786286704993665, 0.2369268850561891,
                                                         0.2369268850561891};

template <typename F>
double gauss5(F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t k = 0; k < kGaussNodes.size(); ++k) s += kGaussWeights[k] * f(mid + half * kGaussNodes[k]);
  return s * half;
}

template <typename F>
double adaptive_gauss(F& f, double a, double b, double whole, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gauss5(f, a, mid);
  const double right = gauss5(f, mid, b);
  if (depth <= 0 || std::abs(left + right - whole) <= tol) return left + right;
  return adaptive_gauss(f, a, mid, left, 0.5 * tol, depth - 1) +
         adaptive_gauss(f, mid, b, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive 5-point Gauss-Legendre quadrature of f over [a, b].
template <typename F>
double integrate(F&& f, double a, double b, double tol = 1e-13) {
  if (a == b) return 0.0;
  const double whole = detail::gauss5(f, a, b);
  return detail::adaptive_gauss(f, a, b, whole, tol, 40);
}

/// Least-squares line y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

LineFit fit_line(const Vector& x, const Vector& y);

}  // namespace carpet
