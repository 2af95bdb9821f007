#pragma once

// Adaptive embedded Dormand-Prince 5(4) on fixed-size state vectors.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace rkp {

struct StepReport {
  int n_accepted = 0;
  int n_rejected = 0;
};

template <std::size_t N>
using StateN = std::array<double, N>;

namespace detail {

// Dormand-Prince coefficients.
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {0, 0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
inline constexpr double dp_b5[7] = {35.0 / 384,     0, 500.0 / 1113, 125.0 / 192,
                                    -2187.0 / 6784, 11.0 / 84, 0};
inline constexpr double dp_b4[7] = {5179.0 / 57600,  0,          7571.0 / 16695, 393.0 / 640,
                                    -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

}  // namespace detail

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 1e-3;
  double h_max = 0.0;  // 0 = unrestricted
  long max_steps = 50'000'000;
};

// Integrates y' = rhs(t, y) from t0 to t1 (t1 > t0).  The observer is called
// after every accepted step as observer(t, y) and may return false to stop
// early.  Returns the final state reached.
template <std::size_t N, class RHS, class Obs>
StateN<N> integrate(RHS&& rhs, StateN<N> y, double t0, double t1,
                    const IntegratorOptions& opt, Obs&& observer,
                    StepReport* report = nullptr) {
  using State = StateN<N>;
  double t = t0;
  double h = std::min(opt.h_init, t1 - t0);
  if (opt.h_max > 0) h = std::min(h, opt.h_max);
  std::array<State, 7> k;
  k[0] = rhs(t, y);
  StepReport rep;
  bool first_same_as_last = true;
  while (t < t1) {
    if (rep.n_accepted + rep.n_rejected > opt.max_steps)
      throw std::runtime_error("integrate: step limit exceeded");
    if (t + h > t1) h = t1 - t;
    if (!first_same_as_last) k[0] = rhs(t, y);
    State ytmp;
    for (int i = 1; i < 7; ++i) {
      for (std::size_t j = 0; j < N; ++j) {
        double acc = 0;
        for (int m = 0; m < i; ++m) acc += detail::dp_a[i][m] * k[m][j];
        ytmp[j] = y[j] + h * acc;
      }
      k[i] = rhs(t + detail::dp_c[i] * h, ytmp);
    }
    State y5;
    double err = 0;
    for (std::size_t j = 0; j < N; ++j) {
      double acc5 = 0, acc4 = 0;
      for (int m = 0; m < 7; ++m) {
        acc5 += detail::dp_b5[m] * k[m][j];
        acc4 += detail::dp_b4[m] * k[m][j];
      }
      y5[j] = y[j] + h * acc5;
      double sc = opt.atol + opt.rtol * std::max(std::fabs(y[j]), std::fabs(y5[j]));
      double e = h * (acc5 - acc4) / sc;
      err += e * e;
    }
    err = std::sqrt(err / N);
    if (err <= 1.0) {
      t += h;
      y = y5;
      k[0] = k[6];  // FSAL
      first_same_as_last = true;
      ++rep.n_accepted;
      if (!observer(t, y)) break;
    } else {
      ++rep.n_rejected;
      first_same_as_last = false;
    }
    double fac = 0.9 * std::pow(err > 1e-300 ? err : 1e-300, -0.2);
    fac = std::clamp(fac, 0.2, 5.0);
    h *= fac;
    if (opt.h_max > 0) h = std::min(h, opt.h_max);
    if (!(h > 0) || t + h == t)
      throw std::runtime_error("integrate: step size underflow at t=" + std::to_string(t));
  }
  if (report) *report = rep;
  return y;
}

template <std::size_t N, class RHS>
StateN<N> integrate(RHS&& rhs, const StateN<N>& y0, double t0, double t1,
                    const IntegratorOptions& opt = {}, StepReport* report = nullptr) {
  return integrate<N>(std::forward<RHS>(rhs), y0, t0, t1, opt,
                      [](double, const StateN<N>&) { return true; }, report);
}

}  // namespace rkp
