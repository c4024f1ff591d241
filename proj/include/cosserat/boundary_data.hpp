#pragma once

#include <utility>
#include <vector>

#include "cosserat/dipole.hpp"
#include "cosserat/field.hpp"
#include "cosserat/surface.hpp"
#include "cosserat/trisurface.hpp"

namespace cosserat {

// Endpoint slots for the i-th dipole pair of the boundary construction.
// xi sits on the upper unit sphere at height lambda_i = i / (2 n_target),
// eta is its antipode, and the four insertion points split radially at
// distances 1 -+ eps so each chain pierces the unit sphere.
struct DipoleEndpoints {
  Vector3 xi = Vector3::Zero();
  Vector3 eta = Vector3::Zero();
  Vector3 p_plus = Vector3::Zero();   // lift degree +1, just inside the sphere
  Vector3 n_plus = Vector3::Zero();   // lift degree -1, just outside
  Vector3 p_minus = Vector3::Zero();  // mirrored pair through eta
  Vector3 n_minus = Vector3::Zero();
};

std::vector<DipoleEndpoints> boundary_dipole_endpoints(int n_target, double epsilon);

// z-extent of the radius-eps tube around the chain through the point at
// height lambda on the upper unit sphere; the chain box sits inside this
// tube once the chain has at least 3 cubes.
std::pair<double, double> tube_z_extent(double lambda, double epsilon);

struct BoundaryDataOptions {
  // Cubes per chain; 3 is the least count whose boxes stay inside the
  // radius-eps tubes (the chain box reaches sqrt(3) a from the segment).
  int m = 3;
  double alpha_ratio = 0.125;  // flip disc radius as a fraction of the cube half-width
  DipoleOptions dipole;        // forwarded to insert_dipole
  DegreeOptions degree;        // forwarded to the chain ledgers
  bool with_ledgers = true;    // analytic degree ledger per chain
  int trace_polar = 96;        // sphere patch resolution for the exported trace
  int trace_azimuth = 192;
};

// Boundary construction on the radius-2 ball: the zero-energy base
// phi(x, y, z) = (-x, -y, z) with director e3 everywhere, decorated with
// 2 n_target dipole chains inside disjoint radial eps-tubes. The trace on
// the unit sphere is sampled onto a quadrature patch; its director has
// winding number zero.
struct BoundaryData {
  CosseratField g_tilde;
  std::vector<DipoleEndpoints> endpoints;   // one entry per index i
  std::vector<DipoleConstruction> dipoles;  // insertion order +1, -1, +2, -2, ...
  std::vector<DipoleDegreeLedger> ledgers;  // same order; empty when disabled
  std::vector<DipoleAudit> audits;          // unclipped chain energies, same order
  std::vector<double> unit_ball_per_chain;  // audit totals clipped to the unit ball

  int n_target = 0;
  double epsilon = 0.0;
  double h = 0.0;
  double min_tube_gap = 0.0;      // smallest measured z-gap between tube extents
  double unit_ball_energy = 0.0;  // sum of the clipped totals
  double chain_energy = 0.0;      // sum of the unclipped totals
  double energy_budget = 0.0;     // pi / n_target
  double linear_bound = 0.0;      // (64 pi * 4 n_target + 1) * epsilon

  SurfacePatch trace_patch;  // unit sphere
  PatchValues trace;         // g0: the field sampled on trace_patch
  int trace_mod2 = 0;
  int trace_lift_degree = 0;
};

// Builds the boundary data at grid spacing h. Consecutive tubes must keep a
// z-separation of 1 / (4 n_target) and the innermost tube must clear the
// equator plane by the same margin, otherwise SeparationViolated; the energy
// inside the unit ball must stay below pi / n_target, otherwise
// EpsilonTooLarge with the maximal admissible eps in the message.
BoundaryData build_boundary_data(int n_target, double epsilon, double h,
                                 const BoundaryDataOptions& opts = {});

}  // namespace cosserat
