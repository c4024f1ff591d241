#pragma once

#include <functional>

#include "cosserat/so3.hpp"

namespace cosserat {

struct BubbleParams {
  double alpha = 0.0;                       // disc radius, face length units
  Vector2 center = Vector2::Zero();         // disc center in face coordinates
  Matrix3 orientation = Matrix3::Identity();  // rotation of the target sphere
};

// Director field on a planar face patch, in face coordinates. jacobian
// columns are the raw partials with respect to the two face coordinates.
struct FaceField {
  std::function<Vector3(const Vector2&)> value;
  std::function<Matrix32(const Vector2&)> jacobian;
};

// Deterministic rotation taking e3 to the given unit vector.
Matrix3 align_rotation(const Vector3& to);

// Geodesic interpolation on the unit sphere, t = 0 giving a. Throws
// AntipodalInterpolation when the endpoints nearly cancel.
Vector3 slerp(const Vector3& a, const Vector3& b, double t);

// Full-sphere wrap concentrated at scale alpha^2: on the inner half disc the
// field is orientation * sigma((x - center) / alpha^2) where sigma is the
// inverse stereographic map mirrored so the wrap adds +1 to the face degree
// when the face is oriented with e_u x e_v = outward normal. The outer half
// of the disc blends geodesically back into the base field with a smoothstep
// cutoff. Outside the disc the base field is returned untouched.
FaceField insert_bubble(const FaceField& base, const BubbleParams& p);

// Mirrored inverse stereographic projection and its jacobian.
Vector3 bubble_sigma(const Vector2& z);
Matrix32 bubble_sigma_jacobian(const Vector2& z);

// Director-level gradient density of the core at radius r from the center:
// 8 alpha^4 / (alpha^4 + r^2)^2. The rotation-level density is 8 times this.
double bubble_core_density(double alpha, double r);

// Integral of the core density over the disc of radius rho around the
// center: 8 pi rho^2 / (alpha^4 + rho^2).
double bubble_core_energy(double alpha, double rho);

}  // namespace cosserat
