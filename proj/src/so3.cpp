#include "cosserat/so3.hpp"

#include <cmath>

namespace cosserat {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidUnitVector: return "InvalidUnitVector";
    case ErrorCode::NotAxisRotation: return "NotAxisRotation";
    case ErrorCode::NotTangent: return "NotTangent";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::DegeneratePatch: return "DegeneratePatch";
    case ErrorCode::AmbiguousLift: return "AmbiguousLift";
    case ErrorCode::LiftObstruction: return "LiftObstruction";
    case ErrorCode::DegreeUnresolved: return "DegreeUnresolved";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::AmbiguousSeparation: return "AmbiguousSeparation";
    case ErrorCode::ValueNotRegular: return "ValueNotRegular";
    case ErrorCode::AntipodalInterpolation: return "AntipodalInterpolation";
    case ErrorCode::AlphaTooLarge: return "AlphaTooLarge";
    case ErrorCode::SegmentTooClose: return "SegmentTooClose";
    case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorCode::SeparationViolated: return "SeparationViolated";
    case ErrorCode::NumericalBlowup: return "NumericalBlowup";
    case ErrorCode::BoundaryMismatch: return "BoundaryMismatch";
    case ErrorCode::NoAdmissibleDisc: return "NoAdmissibleDisc";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

void MaterialConstants::validate() const {
  if (!(mu1 > 0.0) || !(muc > 0.0) || !(mu2 > 0.0))
    fail(ErrorCode::InvalidArgument, "material weights mu1, muc, mu2 must be positive");
  if (!(lambda > 0.0))
    fail(ErrorCode::InvalidArgument, "lambda must be positive");
  if (!(p >= 2.0))
    fail(ErrorCode::InvalidArgument, "curvature exponent p must be >= 2");
}

bool is_rotation(const Matrix3& R, double tol) {
  Matrix3 g = R.transpose() * R - Matrix3::Identity();
  return g.norm() <= tol && std::abs(R.determinant() - 1.0) <= tol;
}

bool is_axis_rotation(const Matrix3& R, double tol) {
  if (!is_rotation(R, tol)) return false;
  return (R - R.transpose()).norm() <= tol && std::abs(R.trace() + 1.0) <= tol;
}

Matrix3 cover(const Vector3& q) {
  if (std::abs(q.norm() - 1.0) > 1e-12)
    fail(ErrorCode::InvalidUnitVector, "cover() needs a unit axis");
  return 2.0 * (q * q.transpose()) - Matrix3::Identity();
}

Vector3 axis_of(const Matrix3& R, double tol) {
  if (!is_axis_rotation(R, tol))
    fail(ErrorCode::NotAxisRotation, "matrix is not a rotation by pi");
  // (R + I)/2 = q q^T; read q off the strongest column.
  Matrix3 M = 0.5 * (R + Matrix3::Identity());
  int j = 0;
  M.diagonal().maxCoeff(&j);
  double d = M(j, j);
  if (d <= 0.0)
    fail(ErrorCode::NotAxisRotation, "degenerate axis projector");
  Vector3 q = M.col(j) / std::sqrt(d);
  q.normalize();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(q[i]) > 1e-6) {
      if (q[i] < 0.0) q = -q;
      break;
    }
  }
  return q;
}

Matrix3 cover_differential(const Vector3& q, const Vector3& v) {
  if (std::abs(q.norm() - 1.0) > 1e-12)
    fail(ErrorCode::InvalidUnitVector, "cover_differential() needs a unit axis");
  if (std::abs(v.dot(q)) > 1e-8 * std::max(1.0, v.norm()))
    fail(ErrorCode::NotTangent, "direction is not tangent to the axis sphere");
  return cover_differential_unchecked(q, v);
}

Matrix3 p_operator(const Matrix3& A, const MaterialConstants& c) {
  c.validate();
  Matrix3 sym = 0.5 * (A + A.transpose());
  Matrix3 skew = 0.5 * (A - A.transpose());
  double tr = A.trace();
  Matrix3 dev = sym - (tr / 3.0) * Matrix3::Identity();
  return std::sqrt(c.mu1) * dev + std::sqrt(c.muc) * skew +
         (std::sqrt(c.mu2) / 3.0) * tr * Matrix3::Identity();
}

std::pair<double, double> cosserat_density(const Matrix3& Dphi, const Matrix3& R,
                                           const std::array<Matrix3, 3>& DR,
                                           const MaterialConstants& c) {
  Matrix3 A = R.transpose() * Dphi - Matrix3::Identity();
  double deformation;
  if (c.mu1 == 1.0 && c.muc == 1.0 && c.mu2 == 1.0) {
    deformation = A.squaredNorm();
  } else {
    deformation = p_operator(A, c).squaredNorm();
  }
  // |R^T DR|^2 = |DR|^2 since R is orthogonal and acts slice-wise.
  double s = DR[0].squaredNorm() + DR[1].squaredNorm() + DR[2].squaredNorm();
  double curvature = (c.p == 2.0) ? c.lambda * s : c.lambda * std::pow(s, 0.5 * c.p);
  return {deformation, curvature};
}

}  // namespace cosserat
