#include "cosserat/field.hpp"

#include <algorithm>
#include <cmath>

namespace cosserat {

void CosseratField::validate() const {
  const std::size_t sz = domain.size();
  if (phi.size() != sz || n.size() != sz || dirichlet.size() != sz)
    fail(ErrorCode::InvalidArgument, "field arrays do not match the grid");
  for (std::size_t i = 0; i < sz; ++i) {
    if (static_cast<NodeClass>(domain.node_class[i]) == NodeClass::Outside) continue;
    if (std::abs(n[i].norm() - 1.0) > 1e-10)
      fail(ErrorCode::InvalidUnitVector, "non-unit director at an in-shape node");
    if (dirichlet[i] &&
        static_cast<NodeClass>(domain.node_class[i]) != NodeClass::Boundary)
      fail(ErrorCode::InvalidArgument, "dirichlet flag on a non-boundary node");
  }
}

CosseratField make_field(const GridDomain& domain, const FieldSampler& s) {
  CosseratField f;
  f.domain = domain;
  const std::size_t sz = domain.size();
  f.phi.resize(sz);
  f.n.resize(sz);
  f.dirichlet.assign(sz, 0);
  for (int i = 0; i < domain.nx; ++i)
    for (int j = 0; j < domain.ny; ++j)
      for (int k = 0; k < domain.nz; ++k) {
        const std::size_t idx = domain.index(i, j, k);
        const Vector3 x = domain.position(i, j, k);
        f.phi[idx] = s.deformation(x);
        Vector3 q = s.director(x);
        double norm = q.norm();
        if (!(norm > 0.5))
          fail(ErrorCode::InvalidUnitVector, "sampler returned a degenerate director");
        f.n[idx] = q / norm;
        if (domain.cls(i, j, k) == NodeClass::Boundary) f.dirichlet[idx] = 1;
      }
  return f;
}

CosseratField resample_field(const CosseratField& src, const GridDomain& target) {
  src.validate();
  const GridDomain& s = src.domain;
  FieldInterpolator interp(src);
  CosseratField out;
  out.domain = target;
  const std::size_t sz = target.size();
  out.phi.resize(sz);
  out.n.resize(sz);
  out.dirichlet.assign(sz, 0);
  const double snap = 1e-9;
  for (int i = 0; i < target.nx; ++i)
    for (int j = 0; j < target.ny; ++j)
      for (int k = 0; k < target.nz; ++k) {
        const std::size_t idx = target.index(i, j, k);
        const Vector3 x = target.position(i, j, k);
        const Vector3 u = (x - s.node_lo) / s.h;
        const int si = static_cast<int>(std::lround(u[0]));
        const int sj = static_cast<int>(std::lround(u[1]));
        const int sk = static_cast<int>(std::lround(u[2]));
        const bool aligned = std::abs(u[0] - si) < snap && std::abs(u[1] - sj) < snap &&
                             std::abs(u[2] - sk) < snap && si >= 0 && si < s.nx &&
                             sj >= 0 && sj < s.ny && sk >= 0 && sk < s.nz;
        if (aligned) {
          const std::size_t sidx = s.index(si, sj, sk);
          out.phi[idx] = src.phi[sidx];
          out.n[idx] = src.n[sidx];
        } else {
          out.phi[idx] = interp.deformation(x);
          out.n[idx] = interp.director(x);
        }
        if (target.cls(i, j, k) == NodeClass::Boundary) out.dirichlet[idx] = 1;
      }
  return out;
}

void FieldInterpolator::cell_weights(const Vector3& x, int idx[8], double w[8]) const {
  const GridDomain& d = f_->domain;
  Vector3 u = (x - d.node_lo) / d.h;
  const double pad = 1e-9;
  for (int a = 0; a < 3; ++a) {
    double top = (a == 0 ? d.nx : a == 1 ? d.ny : d.nz) - 1.0;
    if (u[a] < -pad || u[a] > top + pad)
      fail(ErrorCode::OutsideDomain, "interpolation point beyond the node lattice");
    u[a] = std::clamp(u[a], 0.0, top);
  }
  int i = std::min(static_cast<int>(u[0]), d.nx - 2);
  int j = std::min(static_cast<int>(u[1]), d.ny - 2);
  int k = std::min(static_cast<int>(u[2]), d.nz - 2);
  double fx = u[0] - i, fy = u[1] - j, fz = u[2] - k;
  int c = 0;
  for (int di = 0; di < 2; ++di)
    for (int dj = 0; dj < 2; ++dj)
      for (int dk = 0; dk < 2; ++dk) {
        idx[c] = static_cast<int>(d.index(i + di, j + dj, k + dk));
        w[c] = (di ? fx : 1.0 - fx) * (dj ? fy : 1.0 - fy) * (dk ? fz : 1.0 - fz);
        ++c;
      }
}

Vector3 FieldInterpolator::deformation(const Vector3& x) const {
  int idx[8];
  double w[8];
  cell_weights(x, idx, w);
  Vector3 v = Vector3::Zero();
  for (int c = 0; c < 8; ++c) v += w[c] * f_->phi[idx[c]];
  return v;
}

Vector3 FieldInterpolator::director(const Vector3& x) const {
  int idx[8];
  double w[8];
  cell_weights(x, idx, w);
  Vector3 v = Vector3::Zero();
  for (int c = 0; c < 8; ++c) v += w[c] * f_->n[idx[c]];
  double norm = v.norm();
  if (norm < 0.05)
    fail(ErrorCode::AmbiguousLift,
         "director interpolation collapsed between nearly antipodal values");
  return v / norm;
}

}  // namespace cosserat
