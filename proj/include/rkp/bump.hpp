#pragma once

// Smooth step built from s(t) = exp(-1/t): sigma(t) = s(t)/(s(t)+s(1-t)),
// rescaled to arbitrary supports, with analytic first and second derivatives.

#include <cmath>

namespace rkp {

struct SmoothValue {
  double v = 0, d1 = 0, d2 = 0;
};

namespace detail {

inline SmoothValue exp_s(double t) {
  if (t <= 0) return {0, 0, 0};
  double v = std::exp(-1.0 / t);
  double d1 = v / (t * t);
  double d2 = v / (t * t * t * t) - 2 * v / (t * t * t);
  return {v, d1, d2};
}

}  // namespace detail

/// sigma on [0,1]: 0 for t<=0, 1 for t>=1, C-infinity monotone in between.
inline SmoothValue smooth_sigma(double t) {
  if (t <= 0) return {0, 0, 0};
  if (t >= 1) return {1, 0, 0};
  SmoothValue u = detail::exp_s(t);
  SmoothValue w = detail::exp_s(1 - t);
  double wv = w.v, wd1 = -w.d1, wd2 = w.d2;  // derivatives of s(1-t) in t
  double den = u.v + wv;
  double num1 = u.d1 * wv - u.v * wd1;
  double v = u.v / den;
  double d1 = num1 / (den * den);
  double num1p = u.d2 * wv - u.v * wd2;
  double d2 = (num1p * den - 2 * num1 * (u.d1 + wd1)) / (den * den * den);
  return {v, d1, d2};
}

/// Non-decreasing step: 0 for x <= a, 1 for x >= b.
struct SmoothStep {
  double a = 0, b = 1;
  SmoothValue operator()(double x) const {
    double scale = 1.0 / (b - a);
    SmoothValue s = smooth_sigma((x - a) * scale);
    return {s.v, s.d1 * scale, s.d2 * scale * scale};
  }
};

}  // namespace rkp
