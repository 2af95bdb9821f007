#pragma once

// Interpolated model Hamiltonians: the lower-energy stack (K, G, spliced
// H~2, H~), the upper-energy mirror above the critical value, and the
// x2-free appendix stack, with parameter validation, critical points and
// sign certificates.

#include <random>
#include <vector>

#include "rkp/bump.hpp"
#include "rkp/core.hpp"

namespace rkp {

enum class StackRegime { Lower, Upper, Appendix };

struct StackParams {
  StackRegime regime = StackRegime::Lower;
  double c = -2;
  double E0 = -0.1;
  double lam3 = 3;  // Lambda3 (lower/appendix) or nu3 (upper, negative)
  double eps0 = 0.3;
  double eps1 = 0.2;
  double eps2 = 0.2;
  double B = -4;  // interpolation constant B (lower/appendix) or D (upper)

  // derived at build time
  double lam1 = 0;  // Lambda1 = (-2 E_direct_u)^(-1/2), or nu1 (upper)
  double lam2 = 0;  // Lambda2 = (-2 E0)^(-1/2), or nu2 (upper)
};

struct Scalar2 {
  double v = 0;
  Vec2 g{};   // (d/dx2, d/dy2)
  Mat2 h{};   // Hessian in (x2, y2)
};

/// H in Poincare coordinates, -1/(2 y2^2) - y2 + (x1^2+y1^2)/2, without any
/// modification.
double unmodified_h(const Vec4& z);

struct CriticalPoint {
  double x2 = 0, y2 = 0;
  double value = 0;
  int morse_index = 0;  // of the 2-var H~2
};

struct CriticalPointReport {
  std::vector<CriticalPoint> points;
  bool minimum_line = false;  // appendix: y2 = Lambda3 line of minima
  int grid_seeds = 0;
};

struct SignCertificate {
  bool pass = false;
  int checked = 0;
  double worst_negative_zone = 0;  // max of K_y2 where it must be < 0
  double worst_positive_zone = 0;  // min of K_y2 where it must be > 0
  double critical_row_max = 0;     // max |K_y2| on y2 = Lambda3
  double sigma_min_y2 = 0;
  Vec4 offending{};
};

class ModelHamiltonian {
 public:
  static ModelHamiltonian build(const StackParams& p, bool validate = true);

  const StackParams& params() const { return p_; }
  StackRegime regime() const { return p_.regime; }
  /// Energy value cutting out Sigma: c for lower/appendix, -c for upper.
  double level() const;

  /// The 2-variable part: spliced H~2 (lower), spliced -H~2 mirror (upper),
  /// or H^2 (appendix, x2-independent).
  Scalar2 h2(double x2, double y2) const;

  double value4(const Vec4& z) const;
  Vec4 grad4(const Vec4& z) const;
  Mat4 hess4(const Vec4& z) const;

  /// Root y2 > Lambda3 of K(x2, y2) = c (lower) or of H^2(y2) = c
  /// (appendix).
  double lambda_max(double x2) const;

  /// Newton projection onto Sigma = {value4 = level} along the gradient.
  Vec4 project_sigma(Vec4 z, double tol = 1e-12) const;

  /// Rejection sampling of Sigma points inside the natural bounding box.
  std::vector<Vec4> sample_sigma(std::mt19937_64& rng, int n) const;

  /// Anti-symplectic involution (x1,x2,y1,y2) -> (-x1, 4pi-x2, y1, y2).
  static Vec4 rho(const Vec4& z);

 private:
  StackParams p_;
  SmoothStep f_;  // y2 interpolation zone
  SmoothStep g_;  // x2 periodicity-breaking zone

  Scalar2 ktilde(double x2, double y2) const;  // pre-symmetrization branch
  Scalar2 interp_k(double x2, double y2) const;
};

/// Right-hand side of the strict B (or D) bound; the parameter must lie
/// strictly below it.
double b_bound(const StackParams& p);

CriticalPointReport critical_points(const ModelHamiltonian& m);
SignCertificate sign_certificates(const ModelHamiltonian& m, int grid = 512,
                                  int sigma_samples = 2000, unsigned seed = 0);

}  // namespace rkp
