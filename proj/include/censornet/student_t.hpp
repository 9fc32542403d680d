#pragma once

#include <cmath>

#include "censornet/errors.hpp"

namespace censornet {

namespace detail {

/// Continued fraction for the regularized incomplete beta, modified Lentz.
inline double ibeta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-15;
  constexpr int max_iter = 500;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw invalid_input_error("incomplete beta: continued fraction did not converge");
}

}  // namespace detail

inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

/// Regularized incomplete beta I_x(a, b).
inline double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw invalid_input_error("incomplete beta: a and b must be > 0");
  if (!(x >= 0.0 && x <= 1.0))
    throw invalid_input_error("incomplete beta: x must lie in [0,1]");
  if (x == 0.0 || x == 1.0) return x;
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * detail::ibeta_continued_fraction(a, b, x) / a;
  return 1.0 - front * detail::ibeta_continued_fraction(b, a, 1.0 - x) / b;
}

/// CDF of Student's t with df degrees of freedom.
inline double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw invalid_input_error("student_t_cdf: df must be > 0");
  if (std::isnan(t)) throw invalid_input_error("student_t_cdf: t is NaN");
  const double x = df / (df + t * t);
  const double half_tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
  return t >= 0.0 ? 1.0 - half_tail : half_tail;
}

/// Quantile of Student's t, by bracketed bisection on the CDF.
/// Absolute accuracy comfortably below 1e-10 over the levels used here.
inline double student_t_quantile(double p, double df) {
  if (!(df > 0.0)) throw invalid_input_error("student_t_quantile: df must be > 0");
  if (!(p > 0.0 && p < 1.0))
    throw invalid_input_error("student_t_quantile: p must lie in (0,1)");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -student_t_quantile(1.0 - p, df);

  double lo = 0.0;
  double hi = 1.0;
  while (student_t_cdf(hi, df) < p) {
    hi *= 2.0;
    if (hi > 1e300)
      throw invalid_input_error("student_t_quantile: quantile out of range");
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_cdf(mid, df) < p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-13 * std::max(1.0, lo)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace censornet
