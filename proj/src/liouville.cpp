#include "rkp/liouville.hpp"

#include <algorithm>
#include <cmath>

namespace rkp {

LiouvilleField LiouvilleField::assemble(const ModelHamiltonian& m) {
  if (m.regime() == StackRegime::Upper)
    throw DomainError("assemble_liouville: lower/appendix stacks only");
  LiouvilleField Y;
  Y.model_ = &m;
  double e2 = m.params().eps2;
  Y.h_ = SmoothStep{kTwoPi - 2 * e2, kTwoPi - e2};
  return Y;
}

Vec4 LiouvilleField::y0(const Vec4& z) const {
  double lam3 = model_->params().lam3;
  return {0.5 * z[0], 0.5 * z[1], 0.5 * z[2], 0.5 * (z[3] - lam3)};
}

Vec4 LiouvilleField::y1(const Vec4& z) const {
  double lam3 = model_->params().lam3;
  return {0.5 * z[0], 0.25 * std::sin(0.5 * z[1]), 0.5 * z[2],
          (z[3] - lam3) * (1.0 - 0.125 * std::cos(0.5 * z[1]))};
}

Vec4 LiouvilleField::ytilde(const Vec4& z) const {
  double lam3 = model_->params().lam3;
  double x2 = z[1], y2 = z[3];
  SmoothValue h = h_(x2);
  double ell = (y2 - lam3) * (0.25 * std::sin(0.5 * x2) - 0.5 * x2);
  double ell_x2 = (y2 - lam3) * (0.125 * std::cos(0.5 * x2) - 0.5);
  double ell_y2 = 0.25 * std::sin(0.5 * x2) - 0.5 * x2;
  // Y0 + Hamiltonian vector field of h*ell
  return {0.5 * z[0], 0.5 * x2 + h.v * ell_y2, 0.5 * z[2],
          0.5 * (y2 - lam3) - (h.d1 * ell + h.v * ell_x2)};
}

Vec4 LiouvilleField::operator()(const Vec4& z) const {
  if (model_->regime() == StackRegime::Appendix) {
    double lam3 = model_->params().lam3;
    return {0.5 * z[0], 0.0, 0.5 * z[2], z[3] - lam3};
  }
  if (z[1] <= kTwoPi) return ytilde(z);
  // mirror through rho: Y(z) = Drho . Y(rho(z))
  Vec4 w = ytilde(ModelHamiltonian::rho(z));
  return {-w[0], -w[1], w[2], w[3]};
}

Vec4 ContactData::lambda_covector(const Vec4& z) const {
  Vec4 v = Y(z);
  return {v[2], v[3], -v[0], -v[1]};
}

double ContactData::lambda_of(const Vec4& z, const Vec4& v) const {
  return dot(lambda_covector(z), v);
}

Vec4 ContactData::x_h(const Vec4& z) const {
  Vec4 g = Y.model().grad4(z);
  return {g[2], g[3], -g[0], -g[1]};
}

double ContactData::pairing(const Vec4& z) const {
  double k = lambda_of(z, x_h(z));
  if (k <= 0)
    throw DomainError("contact_eval: lambda(X_H) <= 0, transversality fails");
  return k;
}

Vec4 ContactData::reeb(const Vec4& z) const {
  double k = pairing(z);
  return (1.0 / k) * x_h(z);
}

ContactData contact_data(const ModelHamiltonian& m) {
  return {LiouvilleField::assemble(m)};
}

double liouville_defect(const LiouvilleField& Y, const Vec4& z) {
  auto lam = [&Y](const Vec4& w) -> Vec4 {
    Vec4 v = Y(w);
    return {v[2], v[3], -v[0], -v[1]};
  };
  auto antisym = [&](double h) {
    Mat4 A{};
    std::array<Vec4, 4> dplus, dminus;
    for (int a = 0; a < 4; ++a) {
      Vec4 zp = z, zm = z;
      zp[a] += h;
      zm[a] -= h;
      dplus[a] = lam(zp);
      dminus[a] = lam(zm);
    }
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        A[a][b] = (dplus[a][b] - dminus[a][b]) / (2 * h) -
                  (dplus[b][a] - dminus[b][a]) / (2 * h);
    return A;
  };
  const double h = 1e-5;
  Mat4 A1 = antisym(h), A2 = antisym(0.5 * h);
  Mat4 Om{};
  Om[2][0] = 1;
  Om[0][2] = -1;
  Om[3][1] = 1;
  Om[1][3] = -1;
  double defect = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double richardson = (4 * A2[a][b] - A1[a][b]) / 3;
      defect = std::max(defect, std::fabs(richardson - Om[a][b]));
    }
  return defect;
}

ScanResult transversality_scan(const ModelHamiltonian& m, const LiouvilleField& Y,
                               int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  auto samples = m.sample_sigma(rng, n);
  ScanResult res;
  res.n = n;
  res.seed = seed;
  res.min_value = 1e300;
  for (const Vec4& z : samples) {
    double v = dot(m.grad4(z), Y(z));
    if (v < res.min_value) {
      res.min_value = v;
      res.argmin = z;
    }
  }
  return res;
}

double reeb_period(const ContactData& cd, const std::vector<Vec4>& samples,
                   double period_H) {
  size_t n = samples.size();
  double acc = 0;
  for (size_t i = 0; i + 1 < n; ++i)
    acc += 0.5 * (cd.pairing(samples[i]) + cd.pairing(samples[i + 1]));
  return acc * period_H / (n - 1);
}

InvolutionResult involution_suite(const ContactData& cd, const OrbitRecord& orbit) {
  if (orbit.samples.size() < 64)
    throw DomainError("involution_suite: orbit undersampled");
  InvolutionResult res;
  res.mirrored = orbit;
  res.mirrored.name = orbit.name + "_rho";
  size_t n = orbit.samples.size();
  for (size_t i = 0; i < n; ++i)
    res.mirrored.samples[i] = ModelHamiltonian::rho(orbit.samples[(n - 1) - i]);
  // Reeb period is preserved by the anti-contact involution; recompute from
  // the mirrored samples to keep the record honest.
  res.mirrored.period_Reeb = reeb_period(cd, res.mirrored.samples, orbit.period_H);

  auto hausdorff = [](const std::vector<Vec4>& A, const std::vector<Vec4>& B) {
    double worst = 0;
    for (const Vec4& a : A) {
      double best = 1e300;
      for (const Vec4& b : B) best = std::min(best, norm(a - b));
      worst = std::max(worst, best);
    }
    return worst;
  };
  res.hausdorff = std::max(hausdorff(orbit.samples, res.mirrored.samples),
                           hausdorff(res.mirrored.samples, orbit.samples));
  res.symmetric = res.hausdorff < 1e-8;
  res.mirrored.symmetric = res.symmetric;
  if (res.symmetric) {
    // crossings of Fix(rho) = {x1 = 0, x2 = 2pi}
    int hits = 0;
    for (size_t i = 0; i + 1 < n; ++i) {
      double a = orbit.samples[i][0], b = orbit.samples[i + 1][0];
      bool crossing = (a == 0 && i + 1 < n) || a * b < 0;
      if (!crossing) continue;
      double t = (a == 0) ? 0.0 : a / (a - b);
      double x2 = orbit.samples[i][1] + t * (orbit.samples[i + 1][1] - orbit.samples[i][1]);
      if (std::fabs(x2 - kTwoPi) < 1e-5) ++hits;
    }
    res.fixed_set_hits = hits;
  }
  return res;
}

}  // namespace rkp
