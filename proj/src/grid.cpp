#include "cosserat/grid.hpp"

#include <cmath>

namespace cosserat {

std::size_t GridDomain::count(NodeClass c) const {
  std::size_t n = 0;
  for (std::uint8_t v : node_class)
    if (static_cast<NodeClass>(v) == c) ++n;
  return n;
}

namespace {

void check_resolution(double min_extent, double h) {
  if (!(h > 0.0)) fail(ErrorCode::InvalidArgument, "grid spacing must be positive");
  int across = static_cast<int>(std::floor(min_extent / h + 1e-12)) + 1;
  if (across < 4)
    fail(ErrorCode::ResolutionTooCoarse,
         "fewer than 4 nodes across the smallest shape extent");
}

}  // namespace

GridDomain make_ball_domain(const Vector3& center, double radius, double h) {
  if (!(radius > 0.0)) fail(ErrorCode::InvalidArgument, "ball radius must be positive");
  check_resolution(2.0 * radius, h);

  GridDomain d;
  d.shape = ShapeTag::Ball;
  d.center = center;
  d.radius = radius;
  d.h = h;
  d.shape_lo = center - Vector3::Constant(radius);
  d.shape_hi = center + Vector3::Constant(radius);
  // Two spare layers outside the ball keep every interpolation cell that
  // touches the rim fully inside the array.
  int half = static_cast<int>(std::ceil(radius / h - 1e-12)) + 2;
  d.node_lo = center - Vector3::Constant(half * h);
  d.nx = d.ny = d.nz = 2 * half + 1;
  d.node_class.assign(d.size(), static_cast<std::uint8_t>(NodeClass::Outside));

  const double r2 = radius * radius;
  auto inside = [&](int i, int j, int k) {
    return (d.position(i, j, k) - center).squaredNorm() <= r2;
  };
  for (int i = 0; i < d.nx; ++i)
    for (int j = 0; j < d.ny; ++j)
      for (int k = 0; k < d.nz; ++k) {
        if (!inside(i, j, k)) continue;
        bool interior = i > 0 && i + 1 < d.nx && j > 0 && j + 1 < d.ny && k > 0 &&
                        k + 1 < d.nz && inside(i - 1, j, k) && inside(i + 1, j, k) &&
                        inside(i, j - 1, k) && inside(i, j + 1, k) &&
                        inside(i, j, k - 1) && inside(i, j, k + 1);
        d.node_class[d.index(i, j, k)] = static_cast<std::uint8_t>(
            interior ? NodeClass::Interior : NodeClass::Boundary);
      }
  if (d.count(NodeClass::Interior) == 0)
    fail(ErrorCode::ResolutionTooCoarse, "ball grid has no interior nodes");
  return d;
}

GridDomain make_box_domain(const Vector3& lo, const Vector3& hi, double h, ShapeTag tag) {
  Vector3 ext = hi - lo;
  if (!(ext.minCoeff() > 0.0))
    fail(ErrorCode::InvalidArgument, "box extents must be positive");
  check_resolution(ext.minCoeff(), h);
  if (tag == ShapeTag::Ball) fail(ErrorCode::InvalidArgument, "box builder given ball tag");

  GridDomain d;
  d.shape = tag;
  d.h = h;
  d.shape_lo = lo;
  d.shape_hi = hi;
  d.node_lo = lo;
  auto n_of = [&](double e) { return static_cast<int>(std::lround(e / h)) + 1; };
  d.nx = n_of(ext[0]);
  d.ny = n_of(ext[1]);
  d.nz = n_of(ext[2]);
  d.node_class.assign(d.size(), static_cast<std::uint8_t>(NodeClass::Boundary));
  for (int i = 1; i + 1 < d.nx; ++i)
    for (int j = 1; j + 1 < d.ny; ++j)
      for (int k = 1; k + 1 < d.nz; ++k)
        d.node_class[d.index(i, j, k)] = static_cast<std::uint8_t>(NodeClass::Interior);
  if (d.count(NodeClass::Interior) == 0)
    fail(ErrorCode::ResolutionTooCoarse, "box grid has no interior nodes");
  return d;
}

double boundary_distance(const GridDomain& d, const Vector3& x) {
  if (d.shape == ShapeTag::Ball) return d.radius - (x - d.center).norm();
  double dist = x[0] - d.shape_lo[0];
  for (int c = 0; c < 3; ++c) {
    dist = std::min(dist, x[c] - d.shape_lo[c]);
    dist = std::min(dist, d.shape_hi[c] - x[c]);
  }
  return dist;
}

}  // namespace cosserat
