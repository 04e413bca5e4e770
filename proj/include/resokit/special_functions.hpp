#pragma once

// Scaled error-function family used by the Gaussian-regularized loop integral.
//
// The loop integral involves exp(y^2) erfc(y) below threshold and the Dawson
// function above it. Both multiply an exponentially large factor by an
// exponentially small one, so they are evaluated in scaled form. The "tail"
// variants return the deviation from the large-argument limit directly, which
// is where the loop integral suffers cancellation.

#include <cmath>
#include <numbers>

namespace resokit::special {

namespace detail {

// Above this argument the asymptotic series reaches full double precision
// before it starts to diverge (smallest term ~ exp(-x^2)).
inline constexpr double asymptotic_threshold = 6.5;

// exp(s * x^2) with x^2 split into hi + lo so the exponent carries no
// rounding error from squaring.
inline double exp_of_square(double x, double s) {
  const double hi = x * x;
  const double lo = std::fma(x, x, -hi);
  return std::exp(s * hi) * (1.0 + s * lo);
}

// sum_{n>=1} sign^n (2n-1)!! / (2 x^2)^n, truncated at the smallest term.
inline double asymptotic_tail(double x, double sign) {
  const double inv = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 0.0;
  double previous = INFINITY;
  for (int n = 1; n < 200; ++n) {
    term *= sign * (2.0 * n - 1.0) * inv;
    const double mag = std::fabs(term);
    if (mag > previous) break;
    sum += term;
    if (mag < 1e-17 * std::fabs(sum)) break;
    previous = mag;
  }
  return sum;
}

}  // namespace detail

/// Scaled complementary error function exp(y^2) erfc(y).
inline double erfcx(double y) {
  if (y < 0.0) {
    return 2.0 * detail::exp_of_square(y, 1.0) - erfcx(-y);
  }
  if (y < detail::asymptotic_threshold) {
    return detail::exp_of_square(y, 1.0) * std::erfc(y);
  }
  return (1.0 + detail::asymptotic_tail(y, -1.0)) / (y * std::sqrt(std::numbers::pi));
}

/// sqrt(pi) y erfcx(y) - 1 for y >= 0; tends to -1/(2y^2) as y grows.
inline double erfcx_tail(double y) {
  if (y < 2.0) {
    return std::sqrt(std::numbers::pi) * y * erfcx(y) - 1.0;
  }
  if (y < detail::asymptotic_threshold) {
    // Continued fraction sqrt(pi) erfcx(y) = 1/(y + K), K = (1/2)/(y + 1/(y + (3/2)/(y + ...))),
    // so the tail is -K/(y + K) with no cancellation.
    double inner = y;
    for (int n = 300; n >= 2; --n) inner = y + 0.5 * n / inner;
    const double k = 0.5 / inner;
    return -k / (y + k);
  }
  return detail::asymptotic_tail(y, -1.0);
}

/// Dawson integral F(x) = exp(-x^2) int_0^x exp(t^2) dt.
inline double dawson(double x) {
  if (x < 0.0) return -dawson(-x);
  if (x < detail::asymptotic_threshold) {
    // exp(-x^2) sum x^(2n+1) / (n! (2n+1)); all terms positive.
    const double x2 = x * x;
    double power = x;  // x^(2n+1)/n!
    double sum = x;
    for (int n = 1; n < 400; ++n) {
      power *= x2 / n;
      const double term = power / (2.0 * n + 1.0);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return detail::exp_of_square(x, -1.0) * sum;
  }
  return (1.0 + detail::asymptotic_tail(x, 1.0)) / (2.0 * x);
}

/// 2 x F(x) - 1 for x >= 0; tends to +1/(2x^2) as x grows.
inline double dawson_tail(double x) {
  if (x < detail::asymptotic_threshold) {
    // exp(-x^2) (sum_{m>=1} x^(2m) / (m! (2m-1)) - 1): positive terms, so the
    // near-cancellation of 2 x F(x) against 1 never happens.
    const double x2 = x * x;
    double power = 1.0;  // x^(2m)/m!
    double sum = 0.0;
    for (int m = 1; m < 400; ++m) {
      power *= x2 / m;
      const double term = power / (2.0 * m - 1.0);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return detail::exp_of_square(x, -1.0) * (sum - 1.0);
  }
  return detail::asymptotic_tail(x, 1.0);
}

}  // namespace resokit::special
