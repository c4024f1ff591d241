#pragma once

#include <vector>

#include "cosserat/grid.hpp"
#include "cosserat/sampler.hpp"

namespace cosserat {

// Nodal Cosserat pair on a grid domain. n stores the director axis per node
// (R = cover(n)); keeping the axis rather than the matrix fixes a global lift
// for free. All nodes of the lattice carry values; entries at Outside nodes
// are sampling padding so interpolation cells near a curved rim never mix in
// garbage.
struct CosseratField {
  GridDomain domain;
  std::vector<Vector3> phi;
  std::vector<Vector3> n;
  std::vector<std::uint8_t> dirichlet;  // 1 = value pinned during descent

  void validate() const;
};

// Samples phi and the director at every lattice node; dirichlet is set on the
// Boundary class.
CosseratField make_field(const GridDomain& domain, const FieldSampler& s);

// Transfers a nodal field onto another grid covering a sub-region: target
// nodes that land on source lattice nodes are copied bit for bit, anything
// else is interpolated trilinearly. Dirichlet flags are rebuilt from the
// target's node classes. Throws OutsideDomain when the target lattice is not
// contained in the source lattice.
CosseratField resample_field(const CosseratField& src, const GridDomain& target);

// Trilinear interpolation of a nodal field; directors are renormalized after
// interpolation. Throws OutsideDomain beyond the node lattice and
// AmbiguousLift when interpolated directors nearly cancel.
class FieldInterpolator final : public FieldSampler {
 public:
  explicit FieldInterpolator(const CosseratField& f) : f_(&f) {}
  Vector3 deformation(const Vector3& x) const override;
  Vector3 director(const Vector3& x) const override;
  double feature_scale(const Vector3&) const override { return f_->domain.h; }

 private:
  const CosseratField* f_;
  void cell_weights(const Vector3& x, int idx[8], double w[8]) const;
};

}  // namespace cosserat
