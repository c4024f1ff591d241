#pragma once

#include <array>
#include <functional>
#include <vector>

#include "cosserat/lift.hpp"
#include "cosserat/so3.hpp"

namespace cosserat {

// Oriented triangulation of the unit direction sphere; used as the parameter
// domain for any closed star-shaped surface.
struct TriMesh {
  std::vector<Vector3> dirs;             // unit directions
  std::vector<std::array<int, 3>> tris;  // outward (counterclockwise) oriented

  std::vector<std::vector<int>> vertex_adjacency() const;
};

TriMesh icosphere(int level);

// Closed surface given by a radial graph over directions from center.
struct StarSurface {
  Vector3 center = Vector3::Zero();
  std::function<double(const Vector3&)> radius;  // evaluated on unit dirs

  Vector3 point(const Vector3& dir) const { return center + radius(dir) * dir; }
};

StarSurface star_sphere(const Vector3& center, double r);
StarSurface star_box(const Vector3& lo, const Vector3& hi);

struct DegreeOptions {
  double image_arc_deg = 15.0;   // refine while image edges exceed this
  int max_rounds = 30;
  double residual_tol = 0.1;     // raw excess sum vs rounded integer
  double lift_guard_deg = 80.0;
  int base_level = 2;            // icosphere subdivisions to start from
  double min_domain_arc = 0.0;   // radians; stop refining below this scale
  // Known needle-like features: caps around these directions are pre-refined
  // to focus_arc before the adaptive rounds (e.g. sub-grid bubble cones).
  std::vector<Vector3> focus_dirs;
  double focus_arc = 0.0;        // radians
  double focus_cap = 0.2;        // cap half-angle, radians
};

struct DegreeResult {
  int degree = 0;     // signed in the sampler's gauge (outward orientation)
  int mod2 = 0;
  double residual = 0.0;
  int rounds = 0;
  TriMesh mesh;
  std::vector<Vector3> values;  // per-vertex director / lifted axis
};

// Degree of a continuously-gauged director field sampled on the surface.
DegreeResult surface_degree(const StarSurface& s,
                            const std::function<Vector3(const Vector3&)>& director_at,
                            const DegreeOptions& opts = {});

// Degree of an axis-rotation field: samples R, lifts the axes over the mesh
// graph, then sums the spherical excess. The sign of the result depends on
// the seed sign, so only |degree| and mod2 are meaningful to callers without
// an external gauge.
DegreeResult surface_degree_lifted(const StarSurface& s,
                                   const std::function<Matrix3(const Vector3&)>& rotation_at,
                                   const DegreeOptions& opts = {});

// Signed spherical-excess sum / 4 pi over an S^2-valued vertex map.
// Throws DegenerateTriangle on near-antipodal vertex pairs and
// DegreeUnresolved when the sum is not near an integer.
int triangulation_degree(const std::vector<Vector3>& values,
                         const std::vector<std::array<int, 3>>& tris,
                         double residual_tol, double* residual_out = nullptr);

// Independent cross-check: counts signed preimages of the target w over the
// image triangulation. Throws ValueNotRegular when w lies too close to an
// image edge for the count to be trustworthy.
int preimage_degree(const std::vector<Vector3>& values,
                    const std::vector<std::array<int, 3>>& tris, const Vector3& w);

// Mod-2 degree of an axis-rotation field on the sphere of radius r around a:
// (mod2, signed-in-lift-gauge).
std::pair<int, int> mod2_degree_at(const std::function<Matrix3(const Vector3&)>& rotation_at,
                                   const Vector3& a, double r,
                                   const DegreeOptions& opts = {});

}  // namespace cosserat
