#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>

#include "cosserat/errors.hpp"

namespace cosserat {

using Vector2 = Eigen::Vector2d;
using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;
using Matrix32 = Eigen::Matrix<double, 3, 2>;  // surface jacobians

// Material weights for the energy density
//   |P(R^T Dphi - I)|^2 + lambda |R^T DR|^p
// with P(A) = sqrt(mu1) dev sym A + sqrt(muc) skew A + (sqrt(mu2)/3) tr(A) I.
struct MaterialConstants {
  double mu1 = 1.0;
  double muc = 1.0;
  double mu2 = 1.0;
  double lambda = 1.0;
  double p = 2.0;

  void validate() const;
  bool unit() const {
    return mu1 == 1.0 && muc == 1.0 && mu2 == 1.0 && lambda == 1.0 && p == 2.0;
  }
};

// Orthogonality / symmetry checks at Frobenius tolerance tol.
bool is_rotation(const Matrix3& R, double tol = 1e-10);
// Symmetric orthogonal with trace -1, i.e. a rotation by pi about some axis.
bool is_axis_rotation(const Matrix3& R, double tol = 1e-10);

// R(q) = 2 q q^T - I, the rotation by pi about the unit vector q.
// Throws InvalidUnitVector unless ||q| - 1| <= 1e-12.
Matrix3 cover(const Vector3& q);

// Inverse of cover up to sign: extracts the axis and canonicalizes its sign so
// the first component with |value| > 1e-6 is positive.
// Throws NotAxisRotation if R is not a pi-rotation within tol.
Vector3 axis_of(const Matrix3& R, double tol = 1e-8);

// Differential of cover at q applied to a tangent vector v (v . q = 0):
// dR = 2 (v q^T + q v^T). Throws NotTangent / InvalidUnitVector on bad input.
Matrix3 cover_differential(const Vector3& q, const Vector3& v);

// Unchecked fast path for inner loops; inputs must already satisfy the
// cover_differential preconditions.
inline Matrix3 cover_differential_unchecked(const Vector3& q, const Vector3& v) {
  Matrix3 m = v * q.transpose();
  return 2.0 * (m + m.transpose());
}

// P(A) as above. Linear in A.
Matrix3 p_operator(const Matrix3& A, const MaterialConstants& c);

// Pointwise energy density split into (deformation, curvature):
//   deformation = |P(R^T Dphi - I)|^2
//   curvature   = lambda * |R^T DR|^p  (Frobenius over all 27 entries of DR)
// DR is the stack of the three Cartesian derivative matrices of R.
std::pair<double, double> cosserat_density(const Matrix3& Dphi, const Matrix3& R,
                                           const std::array<Matrix3, 3>& DR,
                                           const MaterialConstants& c);

}  // namespace cosserat
