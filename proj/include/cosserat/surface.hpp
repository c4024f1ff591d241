#pragma once

#include <vector>

#include "cosserat/energy.hpp"
#include "cosserat/sampler.hpp"

namespace cosserat {

// Structured quadrature patch on an embedded surface: a tensor grid in two
// parameters (u possibly periodic) with exact per-cell area weights. Nodes
// sit at cell centers, so builders never place a node on a pole or an apex.
// Tangential gradients are taken in parameter space and converted through
// the first fundamental form, which makes the energy independent of how the
// surface is parametrized.
struct SurfacePatch {
  int nu = 0, nv = 0;
  bool periodic_u = false;
  std::vector<double> pu;      // parameter values along u (size nu)
  std::vector<double> pv;      // parameter values along v (size nv)
  double period_u = 0.0;       // parameter period when periodic_u
  std::vector<Vector3> pos;    // nu*nv positions, index iu*nv+iv
  std::vector<double> weight;  // exact cell areas

  std::size_t idx(int iu, int iv) const {
    return static_cast<std::size_t>(iu) * nv + iv;
  }
  double area() const;
};

// Latitude-longitude sphere; u = azimuth (periodic), v = polar angle, cells
// centered so the poles carry no node. Weight sum is exactly 4 pi r^2.
SurfacePatch make_sphere_patch(const Vector3& center, double radius, int n_polar,
                               int n_azimuth);

// Polar disc / annulus in the plane spanned by (e_u, e_v): u = angle
// (periodic), v = radial index over the given ring structure. ring_edges has
// one more entry than ring_radii; weights are the exact annular cell areas.
SurfacePatch make_polar_patch(const Vector3& origin, const Vector3& e_u,
                              const Vector3& e_v, const std::vector<double>& ring_radii,
                              const std::vector<double>& ring_edges, int n_theta);

// Flat rectangle centered at origin with half-extents (half_u, half_v).
SurfacePatch make_rect_patch(const Vector3& origin, const Vector3& e_u,
                             const Vector3& e_v, double half_u, double half_v, int nu,
                             int nv);

struct PatchValues {
  std::vector<Vector3> phi;
  std::vector<Vector3> n;
};
PatchValues sample_patch(const SurfacePatch& p, const FieldSampler& s);

// Surface energy: deformation_factor * |P(R^T Dphi_S - I)|^2 + lambda
// |DR_S|^p integrated with the patch weights, where Dphi_S and DR_S are the
// tangential (surface) gradients embedded as 3x3 / 3x3x3 objects with zero
// normal-direction component.
EnergyReport surface_energy(const SurfacePatch& p, const PatchValues& v,
                            const MaterialConstants& c, double deformation_factor = 1.0);

// Per-node (deformation, curvature) densities with the same conventions;
// used for pointwise law checks.
std::vector<std::pair<double, double>> surface_density(const SurfacePatch& p,
                                                       const PatchValues& v,
                                                       const MaterialConstants& c);

// Ring structure for resolving a bubble of core width beta inside radius
// r_out: radii graded as r = beta tan(s psi/2) so equal parameter steps sweep
// equal image arcs, then uniform rings out to r_out. Returns quad radii and
// edges for make_polar_patch.
void bubble_ring_structure(double beta, double r_mid, double r_out, int n_core,
                           int n_outer, std::vector<double>& radii,
                           std::vector<double>& edges);

}  // namespace cosserat
