#include "cosserat/slice.hpp"

#include <cmath>
#include <limits>

#include "cosserat/boundary_data.hpp"
#include "cosserat/field.hpp"

namespace cosserat {

StarSurface star_slab_ball(const Vector3& center, double radius, double z_lo,
                           double z_hi) {
  if (!(radius > 0.0)) fail(ErrorCode::InvalidArgument, "slab ball needs a radius");
  if (!(z_lo < z_hi)) fail(ErrorCode::InvalidArgument, "slab bounds are inverted");
  Vector3 c(center[0], center[1], 0.5 * (z_lo + z_hi));
  if (!(std::abs(c[2] - center[2]) < radius))
    fail(ErrorCode::InvalidArgument, "slab does not meet the ball");

  StarSurface s;
  s.center = c;
  s.radius = [center, radius, z_lo, z_hi, c](const Vector3& u) {
    const Vector3 w = c - center;
    const double b = w.dot(u);
    double t = -b + std::sqrt(b * b + radius * radius - w.squaredNorm());
    const double tiny = 1e-14;
    if (u[2] > tiny) t = std::min(t, (z_hi - c[2]) / u[2]);
    if (u[2] < -tiny) t = std::min(t, (z_lo - c[2]) / u[2]);
    return t;
  };
  return s;
}

namespace {

void check_args(const CosseratField& f, int n_target, double epsilon) {
  if (n_target < 1) fail(ErrorCode::InvalidArgument, "n_target must be at least 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    fail(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1)");
  if (f.domain.shape != ShapeTag::Ball)
    fail(ErrorCode::InvalidArgument, "slice diagnostics need a ball domain");
}

struct BandBest {
  DiscReport disc;
  bool any = false;
};

// Scans every grid plane strictly inside each tube-free band and keeps the
// disc of least in-plane curvature; levels are offsets from the ball center.
std::vector<BandBest> scan_bands(const CosseratField& f, int n_target, double epsilon,
                                 double budget) {
  const GridDomain& d = f.domain;
  std::vector<BandBest> out;
  for (int i = 0; i <= n_target; ++i) {
    BandBest b;
    b.disc.band_lo =
        i == 0 ? 0.0 : tube_z_extent(i / (2.0 * n_target), epsilon).second;
    b.disc.band_hi = i == n_target
                         ? std::min(1.0, d.radius)
                         : tube_z_extent((i + 1) / (2.0 * n_target), epsilon).first;
    b.disc.energy = std::numeric_limits<double>::infinity();
    for (int k = 0; k < d.nz; ++k) {
      const double zeta = d.node_lo[2] + k * d.h - d.center[2];
      if (!(zeta > b.disc.band_lo && zeta < b.disc.band_hi)) continue;
      if (!(d.radius * d.radius - zeta * zeta >= 4.0 * d.h * d.h)) continue;
      DiscMetrics m = disc_metrics(f, d.center[2] + zeta);
      if (m.dirichlet_full < b.disc.energy) {
        b.any = true;
        b.disc.mu = zeta;
        b.disc.energy = m.dirichlet_full;
        b.disc.jacobian_upper = 0.5 * m.dirichlet_full;
        b.disc.jacobian_direct = 8.0 * m.jacobian_area;
      }
    }
    b.disc.admissible = b.any && b.disc.energy < budget;
    out.push_back(b);
  }
  return out;
}

}  // namespace

SliceReport slice_diagnostics(const CosseratField& f, int n_target, double epsilon,
                              const SliceOptions& opts) {
  check_args(f, n_target, epsilon);
  const GridDomain& d = f.domain;

  SliceReport rep;
  rep.measure_threshold = opts.sphere_measure;
  for (int i = 1; i <= n_target; ++i) rep.lambdas.push_back(i / (2.0 * n_target));

  std::vector<BandBest> bands = scan_bands(f, n_target, epsilon, opts.disc_budget);
  for (int i = 0; i <= n_target; ++i) {
    const BandBest& b = bands[i];
    if (!b.any)
      fail(ErrorCode::NoAdmissibleDisc,
           "band " + std::to_string(i) + " admits no disc level at this resolution");
    if (!b.disc.admissible)
      fail(ErrorCode::NoAdmissibleDisc,
           "band " + std::to_string(i) + ": best disc energy " +
               std::to_string(b.disc.energy) + " at level " +
               std::to_string(b.disc.mu) + " is not below " +
               std::to_string(opts.disc_budget));
    rep.discs.push_back(b.disc);
  }

  FieldInterpolator interp(f);
  for (int i = 1; i <= n_target; ++i) {
    StarSurface star =
        star_slab_ball(d.center, d.radius, d.center[2] + rep.discs[i - 1].mu,
                       d.center[2] + rep.discs[i].mu);
    DegreeResult dr = surface_degree(
        star, [&interp](const Vector3& x) { return interp.director(x); }, opts.degree);
    rep.slice_mod2.push_back(dr.mod2);
  }

  const double probe = opts.probe_radius > 0.0 ? opts.probe_radius : 2.0 * d.h;
  std::vector<SingularPoint> points = find_singularities(f, probe, opts.singles);
  rep.singularities_per_slice.assign(n_target, 0);
  for (const SingularPoint& p : points) {
    const double zeta = p.location[2] - d.center[2];
    for (int i = 1; i <= n_target; ++i)
      if (zeta > rep.discs[i - 1].mu && zeta < rep.discs[i].mu)
        ++rep.singularities_per_slice[i - 1];
  }
  return rep;
}

MinimizerAudit minimizer_energy_audit(const CosseratField& f, int n_target,
                                      double epsilon, const SliceOptions& opts) {
  check_args(f, n_target, epsilon);
  MinimizerAudit audit;

  EnergyReport er = energy(f, opts.constants);
  const double budget = M_PI / n_target;
  audit.checks.push_back(
      {"total_energy_below_pi_over_n", er.total < budget, er.total, budget});

  std::vector<BandBest> bands = scan_bands(f, n_target, epsilon, opts.disc_budget);
  for (int i = 0; i <= n_target; ++i) {
    const BandBest& b = bands[i];
    audit.checks.push_back({"disc_" + std::to_string(i) + "_below_budget",
                            b.disc.admissible,
                            b.any ? b.disc.energy
                                  : std::numeric_limits<double>::infinity(),
                            opts.disc_budget});
  }
  audit.pass = true;
  for (const AuditCheck& c : audit.checks) audit.pass = audit.pass && c.pass;
  return audit;
}

}  // namespace cosserat
