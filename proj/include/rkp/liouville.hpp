#pragma once

// Liouville vector fields, transversality certificates, the induced contact
// form and Reeb field, and the anti-symplectic involution checks.

#include <random>

#include "rkp/model_ham.hpp"
#include "rkp/orbit_record.hpp"

namespace rkp {

class LiouvilleField {
 public:
  static LiouvilleField assemble(const ModelHamiltonian& m);

  Vec4 operator()(const Vec4& z) const;

  /// Pieces of the lower-stack construction, exposed for testing.
  Vec4 y0(const Vec4& z) const;      // radial field at (0,*,0,Lambda3)
  Vec4 y1(const Vec4& z) const;      // the explicit Liouville field near 2pi
  Vec4 ytilde(const Vec4& z) const;  // Y0 + X_{h l}, valid for x2 <= 2pi

  const ModelHamiltonian& model() const { return *model_; }

 private:
  const ModelHamiltonian* model_ = nullptr;
  SmoothStep h_;  // splice zone [2pi-2eps2, 2pi-eps2]
};

/// Finite-difference defect of the Liouville identity d(i_Y omega0) = omega0
/// at z (central differences, one Richardson step).
double liouville_defect(const LiouvilleField& Y, const Vec4& z);

struct ContactData {
  LiouvilleField Y;

  /// lambda = omega0(Y, .) as a covector in the basis (dx1,dx2,dy1,dy2).
  Vec4 lambda_covector(const Vec4& z) const;
  double lambda_of(const Vec4& z, const Vec4& v) const;
  /// Hamiltonian vector field of the model at z.
  Vec4 x_h(const Vec4& z) const;
  /// lambda(X_H) at z; must be positive on Sigma.
  double pairing(const Vec4& z) const;
  Vec4 reeb(const Vec4& z) const;
};

ContactData contact_data(const ModelHamiltonian& m);

struct ScanResult {
  double min_value = 0;
  Vec4 argmin{};
  int n = 0;
  unsigned seed = 0;
};

/// min over n Sigma-samples of dH(Y).
ScanResult transversality_scan(const ModelHamiltonian& m, const LiouvilleField& Y,
                               int n, unsigned seed);

struct InvolutionResult {
  OrbitRecord mirrored;
  bool symmetric = false;
  double hausdorff = 0;
  int fixed_set_hits = 0;  // for symmetric orbits; expects 2
};

InvolutionResult involution_suite(const ContactData& cd, const OrbitRecord& orbit);

/// Reeb period of a closed orbit sampled uniformly over one Hamiltonian
/// period (last sample = first): integral of lambda(X_H) dt.
double reeb_period(const ContactData& cd, const std::vector<Vec4>& samples,
                   double period_H);

}  // namespace rkp
