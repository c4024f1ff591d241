#pragma once

#include <cstdint>
#include <vector>

#include "cosserat/so3.hpp"

namespace cosserat {

enum class NodeClass : std::uint8_t { Outside = 0, Interior = 1, Boundary = 2 };

enum class ShapeTag : std::uint8_t { Ball = 0, Box = 1, Cuboid = 2 };

// Axis-aligned node lattice with spacing h covering a ball or a box. Nodes are
// classified Outside / Interior / Boundary; Interior nodes always have all six
// axis neighbors inside the shape, so central differences are available there.
struct GridDomain {
  ShapeTag shape = ShapeTag::Box;
  // Shape extent. For balls this is [center - r, center + r]; the node lattice
  // extends two extra layers beyond it so interpolation near the rim stays
  // inside the stored arrays.
  Vector3 shape_lo = Vector3::Zero();
  Vector3 shape_hi = Vector3::Zero();
  double h = 0.0;
  // Node lattice: positions node_lo + h * (i, j, k), 0 <= i < nx etc.
  Vector3 node_lo = Vector3::Zero();
  int nx = 0, ny = 0, nz = 0;
  std::vector<std::uint8_t> node_class;
  // Ball geometry, valid when shape == Ball.
  Vector3 center = Vector3::Zero();
  double radius = 0.0;

  std::size_t size() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) +
            static_cast<std::size_t>(j)) * static_cast<std::size_t>(nz) +
           static_cast<std::size_t>(k);
  }
  Vector3 position(int i, int j, int k) const {
    return node_lo + h * Vector3(i, j, k);
  }
  NodeClass cls(int i, int j, int k) const {
    return static_cast<NodeClass>(node_class[index(i, j, k)]);
  }
  bool in_shape(int i, int j, int k) const {
    return cls(i, j, k) != NodeClass::Outside;
  }
  std::size_t count(NodeClass c) const;
};

// Builders. Throw ResolutionTooCoarse when fewer than 4 nodes span the
// shape's smallest extent.
GridDomain make_ball_domain(const Vector3& center, double radius, double h);
GridDomain make_box_domain(const Vector3& lo, const Vector3& hi, double h,
                           ShapeTag tag = ShapeTag::Box);

// Signed distance of x to the shape boundary: positive inside, negative
// outside.
double boundary_distance(const GridDomain& d, const Vector3& x);

}  // namespace cosserat
