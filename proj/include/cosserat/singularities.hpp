#pragma once

#include <vector>

#include "cosserat/field.hpp"
#include "cosserat/so3.hpp"

namespace cosserat {

struct SingularityOptions {
  // A cell is flagged when some pair of its corner rotations differs by more
  // than this axis-angle. For 180-degree rotations the relative angle is
  // 2*asin of the axis cross product, so the test reduces to a dot product
  // threshold on the directors.
  double flag_angle_deg = 90.0;
  // Pre-refinement hints forwarded to the probe-sphere degree computation,
  // for constructions whose image features are thinner than the base mesh.
  std::vector<Vector3> focus_dirs;
  double focus_arc = 0.0;
};

struct SingularPoint {
  Vector3 location = Vector3::Zero();  // cluster centroid, world coordinates
  int mod2 = 0;
  int lift_degree = 0;  // signed in the gauge of the field's director
  bool degrees_available = false;
  bool ambiguous_separation = false;  // another cluster within 2 probe radii
  double probe_radius = 0.0;
  int cluster_size = 0;  // flagged cells in the cluster
};

// Scans all grid cells for large single-cell rotation jumps, clusters the
// flagged cells, and probes each cluster centroid with a sphere degree.
// Clusters closer together than twice the probe radius are reported with
// degrees marked unavailable, as are clusters whose probe sphere leaves the
// domain.
std::vector<SingularPoint> find_singularities(const CosseratField& f,
                                              double probe_radius,
                                              const SingularityOptions& opts = {});

struct DipoleRecord {
  Vector3 P = Vector3::Zero();
  Vector3 N = Vector3::Zero();
  double cylinder_radius = 0.0;
  double probe_radius = 0.0;
  bool geometry_ok = false;       // capped cylinder around [P,N] inside domain
  bool interior_clean = false;    // no singularities in the cylinder besides P, N
  bool endpoint_mod2_ok = false;  // mod-2 degree 1 at both endpoints
  bool degrees_opposite = false;  // lift degrees +d and -d with d != 0
  int lift_degree_P = 0;
  int lift_degree_N = 0;
  bool verified = false;
};

// Checks whether (P, N) is a dipole for the field's rotation: the capped
// cylinder of the given radius around the segment must lie in the domain and
// contain no singularities besides the endpoints, both endpoints must carry
// mod-2 degree 1, and one common lift over the punctured cylinder must give
// opposite integer degrees on small spheres around P and N.
DipoleRecord verify_dipole(const CosseratField& f, const Vector3& P,
                           const Vector3& N, double cylinder_radius,
                           const SingularityOptions& opts = {});

// Brouwer degree of x -> normalize(phi(x) - regular_value) on the sphere of
// radius r around a. Throws ValueNotRegular when the value lies on the image
// of the sphere.
int map_degree_phi(const CosseratField& f, const Vector3& a, double r,
                   const Vector3& regular_value);

}  // namespace cosserat
