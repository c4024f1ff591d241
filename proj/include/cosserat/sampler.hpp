#pragma once

#include <functional>
#include <memory>

#include "cosserat/so3.hpp"

namespace cosserat {

// Point source for a Cosserat pair (phi, R). R is carried through its axis:
// director(x) is a unit vector q with R(x) = cover(q), and implementations
// must keep the sign of q continuous wherever they are smooth, so the
// director doubles as a global lift of R.
struct FieldSampler {
  virtual ~FieldSampler() = default;
  virtual Vector3 deformation(const Vector3& x) const = 0;
  virtual Vector3 director(const Vector3& x) const = 0;
  Matrix3 rotation(const Vector3& x) const { return cover(director(x)); }
  // Smallest geometric feature length near x; adaptive samplers refine down
  // to a fraction of this before trusting pointwise probes.
  virtual double feature_scale(const Vector3& x) const {
    (void)x;
    return 1.0;
  }
};

// Zero-energy base state: phi rotates space by pi about e3 and the director
// is constant e3, so R^T Dphi = I everywhere and DR = 0.
struct FlipBase final : FieldSampler {
  Vector3 deformation(const Vector3& x) const override {
    return Vector3(-x[0], -x[1], x[2]);
  }
  Vector3 director(const Vector3&) const override { return Vector3(0, 0, 1); }
};

struct FunctionSampler final : FieldSampler {
  std::function<Vector3(const Vector3&)> phi_fn;
  std::function<Vector3(const Vector3&)> dir_fn;
  double feature = 1.0;

  FunctionSampler(std::function<Vector3(const Vector3&)> p,
                  std::function<Vector3(const Vector3&)> d, double scale = 1.0)
      : phi_fn(std::move(p)), dir_fn(std::move(d)), feature(scale) {}
  Vector3 deformation(const Vector3& x) const override { return phi_fn(x); }
  Vector3 director(const Vector3& x) const override { return dir_fn(x); }
  double feature_scale(const Vector3&) const override { return feature; }
};

}  // namespace cosserat
