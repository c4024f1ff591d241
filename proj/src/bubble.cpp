#include "cosserat/bubble.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

#include "cosserat/errors.hpp"

namespace cosserat {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Matrix3 align_rotation(const Vector3& to) {
  if (std::abs(to.norm() - 1.0) > 1e-9)
    fail(ErrorCode::InvalidUnitVector, "alignment target must be a unit vector");
  return Eigen::Quaterniond::FromTwoVectors(Vector3(0, 0, 1), to)
      .toRotationMatrix();
}

Vector3 slerp(const Vector3& a, const Vector3& b, double t) {
  double d = std::clamp(a.dot(b), -1.0, 1.0);
  if (d < -1.0 + 1e-9)
    fail(ErrorCode::AntipodalInterpolation,
         "no unique geodesic between antipodal directors");
  double angle = std::acos(d);
  if (angle < 1e-8) return ((1.0 - t) * a + t * b).normalized();
  double s = std::sin(angle);
  return (std::sin((1.0 - t) * angle) / s) * a + (std::sin(t * angle) / s) * b;
}

Vector3 bubble_sigma(const Vector2& z) {
  double rho = z.squaredNorm();
  return Vector3(2.0 * z[0], -2.0 * z[1], rho - 1.0) / (rho + 1.0);
}

Matrix32 bubble_sigma_jacobian(const Vector2& z) {
  double rho = z.squaredNorm();
  double q = (1.0 + rho) * (1.0 + rho);
  Matrix32 j;
  j(0, 0) = 2.0 * (1.0 + rho - 2.0 * z[0] * z[0]) / q;
  j(0, 1) = -4.0 * z[0] * z[1] / q;
  j(1, 0) = 4.0 * z[0] * z[1] / q;
  j(1, 1) = (-2.0 * (1.0 + rho) + 4.0 * z[1] * z[1]) / q;
  j(2, 0) = 4.0 * z[0] / q;
  j(2, 1) = 4.0 * z[1] / q;
  return j;
}

double bubble_core_density(double alpha, double r) {
  double a4 = alpha * alpha * alpha * alpha;
  double denom = a4 + r * r;
  return 8.0 * a4 / (denom * denom);
}

double bubble_core_energy(double alpha, double rho) {
  double a4 = alpha * alpha * alpha * alpha;
  return 8.0 * kPi * rho * rho / (a4 + rho * rho);
}

FaceField insert_bubble(const FaceField& base, const BubbleParams& p) {
  if (!(p.alpha > 0.0))
    fail(ErrorCode::InvalidArgument, "bubble radius must be positive");
  const double alpha = p.alpha;
  const double beta = alpha * alpha;  // concentration scale of the wrap
  const Vector2 c = p.center;
  const Matrix3 q = p.orientation;
  auto base_value = base.value;
  auto base_jac = base.jacobian;

  auto core = [q, beta, c](const Vector2& uv) {
    return Vector3(q * bubble_sigma((uv - c) / beta));
  };

  auto value = [=](const Vector2& uv) -> Vector3 {
    double r = (uv - c).norm();
    if (r >= alpha) return base_value(uv);
    if (r <= 0.5 * alpha) return core(uv);
    double s = 2.0 * r / alpha - 1.0;             // 0 at the core rim, 1 outside
    double w = 1.0 - s * s * (3.0 - 2.0 * s);     // toward the core value
    return slerp(base_value(uv), core(uv), w);
  };

  auto jacobian = [=](const Vector2& uv) -> Matrix32 {
    double r = (uv - c).norm();
    if (r >= alpha) return base_jac(uv);
    if (r <= 0.5 * alpha)
      return Matrix32(q * bubble_sigma_jacobian((uv - c) / beta) / beta);
    // blended band: differentiate the composite numerically
    double step = 1e-5 * alpha;
    Matrix32 j;
    for (int d = 0; d < 2; ++d) {
      Vector2 e = Vector2::Zero();
      e[d] = step;
      j.col(d) = (value(uv + e) - value(uv - e)) / (2.0 * step);
    }
    return j;
  };

  return FaceField{value, jacobian};
}

}  // namespace cosserat
