#pragma once

#include <vector>

#include "cosserat/bubble.hpp"
#include "cosserat/energy.hpp"
#include "cosserat/trisurface.hpp"

namespace cosserat {

// Oriented chart of one cube face: points are origin + u e_u + v e_v with
// (u, v) in [-half, half]^2 and e_u x e_v equal to the outward normal, so a
// bubble inserted in these coordinates raises the face degree by one.
struct FaceFrame {
  Vector3 origin = Vector3::Zero();
  Vector3 e_u = Vector3::UnitX();
  Vector3 e_v = Vector3::UnitY();
  Vector3 outward = Vector3::UnitZ();
};

// Axis-aligned cube with the six outward-oriented face charts. Face order:
// +x, -x, +y, -y, +z, -z.
struct CubeGeometry {
  Vector3 center = Vector3::Zero();
  double half = 1.0;

  FaceFrame face(int id) const;
  // Face sector containing x (largest center-offset component; ties resolve
  // toward the smaller axis index).
  int face_of(const Vector3& x) const;
  // Radial retraction onto the boundary: center + (x - center) scaled to
  // max-norm half. x must not coincide with the center.
  Vector3 retract(const Vector3& x) const;
  // Coordinates of a boundary point in the chart of its face.
  Vector2 face_coords(int id, const Vector3& x) const;
};

// Chain of m cubes of half-width a covering the segment [P, N]: cube j is
// centered at c_j = P + j * (N - P) / (m - 1), the first and last centers
// landing on the endpoints. In the local frame (world = P + frame * y) the
// chain fills [-a, a]^2 x [-a, d + a].
struct CuboidDecomposition {
  Vector3 P = Vector3::Zero();
  Vector3 N = Vector3::Zero();
  double d = 0.0;
  double a = 0.0;
  int m = 0;
  Matrix3 frame = Matrix3::Identity();

  Vector3 to_local(const Vector3& x) const { return frame.transpose() * (x - P); }
  Vector3 to_world(const Vector3& y) const { return P + frame * y; }
  Vector3 center_local(int j) const { return Vector3(0, 0, 2.0 * a * j); }
  Vector3 center_world(int j) const { return to_world(center_local(j)); }
  bool contains_local(const Vector3& y) const;
  // Index of the cube whose slab holds y; clamped to [0, m-1].
  int cube_index(const Vector3& y) const;
  CubeGeometry cube_local(int j) const { return {center_local(j), a}; }
};

CuboidDecomposition make_cuboid(const Vector3& P, const Vector3& N, int m);

// A dipole construction: the cube chain plus one bubble per internal face
// (between cubes j and j+1, in the chart of the lower cube's top face).
// disc_budgets holds the measured flip integrals recorded at build time.
struct DipoleConstruction {
  CuboidDecomposition K;
  double alpha = 0.0;
  std::vector<BubbleParams> bubbles;
  std::vector<double> disc_budgets;
};

// Field built from a base sampler by retracting every point of the cube
// chain to its cube boundary and reading the bubble-decorated boundary
// field there. The deformation is retracted unchanged; only the director
// carries bubbles. Holds references: base and construction must outlive it.
class DipoleSampler final : public FieldSampler {
 public:
  DipoleSampler(const FieldSampler& base, const DipoleConstruction& con);

  Vector3 deformation(const Vector3& x) const override;
  Vector3 director(const Vector3& x) const override;
  double feature_scale(const Vector3& x) const override;

  // Director on the boundary of cube j at local point y (used by audits).
  Vector3 boundary_director_local(int j, const Vector3& y) const;

 private:
  const FieldSampler* base_;
  const DipoleConstruction* con_;
  std::vector<FaceField> faces_;
};

struct CubeFlipOptions {
  Vector2 center = Vector2::Zero();  // disc center in face coordinates
  int n_core = 64;                   // graded rings through the wrap core
  int n_annulus = 24;                // uniform rings through the blend band
  int n_theta = 48;
  double fd_step_rel = 1e-4;         // phi face differences, relative to half
  MaterialConstants constants;
  DegreeOptions degree;
  bool check_degrees = true;         // probe mod-2 before/after over the cube
};

struct CubeFlipResult {
  BubbleParams params;       // resolved orientation included
  FaceField flipped;         // director on the designated face
  double disc_deformation = 0.0;  // doubled deformation part of the integral
  double disc_curvature = 0.0;
  double disc_total = 0.0;
  int mod2_before = 0;
  int mod2_after = 0;
};

// Degree flip on one cube face: inserts a bubble on the disc of radius alpha
// around opts.center and checks the doubled-deformation surface integral
// over the disc against 64 pi + eps_budget. Throws AlphaTooLarge (quoting
// the measured value) when the budget is exceeded or the disc does not fit.
CubeFlipResult cube_flip(const FieldSampler& f, const CubeGeometry& cube, int face_id,
                         double alpha, double eps_budget,
                         const CubeFlipOptions& opts = {});

// Largest admissible disc radius on the face: bisects between radii whose
// flip stays within budget and those that fail it (or no longer fit).
double find_flip_threshold(const FieldSampler& f, const CubeGeometry& cube,
                           int face_id, double eps_budget,
                           const CubeFlipOptions& opts = {}, int iters = 24);

struct DipoleOptions {
  double eps_budget = 1.0;  // per-flip disc allowance over 64 pi
  int n_core = 64;
  int n_annulus = 24;
  int n_theta = 48;
  double fd_step_rel = 1e-4;
};

struct InsertDipoleResult {
  CosseratField field;
  DipoleConstruction construction;
};

// Builds the bubbles (orientations read from the base director at the face
// centers) and measures each flip disc against the budget.
DipoleConstruction make_dipole_construction(const FieldSampler& base, const Vector3& P,
                                            const Vector3& N, int m, double alpha,
                                            const DipoleOptions& opts = {});

// Plants a singularity pair of opposite lift degree at P and N: resamples f
// inside the cube chain through the retraction of the bubble-decorated
// boundary field, leaving every node outside the chain bit-identical.
// Errors: SegmentTooClose when the chain clearance a + alpha does not fit
// inside the domain, AlphaTooLarge when alpha >= a / 2 or a flip overruns
// its budget.
InsertDipoleResult insert_dipole(const CosseratField& f, const Vector3& P,
                                 const Vector3& N, int m, double alpha,
                                 const DipoleOptions& opts = {});

struct DipoleAuditOptions {
  int n_rect = 40;       // plain faces, nodes per side
  int n_core = 64;       // bubble disc rings
  int n_annulus = 24;
  int n_theta = 48;
  int n_remainder = 12;  // radial levels between the disc rim and the face edge
  double fd_step_rel = 1e-4;
  MaterialConstants constants;
  // Optional restriction of the audit to a clip ball (used when the chain
  // energy must be counted inside a larger domain only).
  bool clip = false;
  Vector3 clip_center = Vector3::Zero();
  double clip_radius = 0.0;
};

// Energy of one retracted cube, split by the standard partition: the ball
// around the center, the cones over the bottom/top inner discs and blend
// annuli, and the rest.
struct RegionEnergies {
  double ball = 0.0;
  double bottom_disc = 0.0;
  double top_disc = 0.0;
  double bottom_annulus = 0.0;
  double top_annulus = 0.0;
  double rest = 0.0;

  double total() const {
    return ball + bottom_disc + top_disc + bottom_annulus + top_annulus + rest;
  }
};

struct DipoleAudit {
  double deformation = 0.0;
  double curvature = 0.0;
  double total = 0.0;
  std::vector<RegionEnergies> per_cube;
};

// Quadrature of the construction's energy over the cube chain. Along each
// retraction ray the density is a closed-form function of the ray parameter,
// so the integral is exact in that variable; across each face it uses graded
// polar rings through the bubble and exact cell weights elsewhere. Requires
// curvature exponent p < 3 (the cone pullback diverges otherwise).
DipoleAudit audit_dipole_energy(const DipoleConstruction& con, const FieldSampler& base,
                                const DipoleAuditOptions& opts = {});

// Probe degrees at every cube center, measured on the analytic construction
// (spheres of probe_radius_rel * a around each center): mod-2 and signed
// lift degree of the director in the construction's own gauge. The
// deformation winding is a nodal-field question; see map_degree_phi.
struct DipoleDegreeLedger {
  std::vector<int> mod2;
  std::vector<int> lift;
};

DipoleDegreeLedger dipole_degree_ledger(const DipoleConstruction& con,
                                        const FieldSampler& base,
                                        double probe_radius_rel = 0.5,
                                        const DegreeOptions& opts = {});

}  // namespace cosserat
