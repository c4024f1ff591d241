#include "cosserat/boundary_data.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "cosserat/errors.hpp"

namespace cosserat {

std::vector<DipoleEndpoints> boundary_dipole_endpoints(int n_target, double epsilon) {
  if (n_target < 1) fail(ErrorCode::InvalidArgument, "n_target must be at least 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    fail(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1)");
  std::vector<DipoleEndpoints> out;
  out.reserve(n_target);
  for (int i = 1; i <= n_target; ++i) {
    const double lam = static_cast<double>(i) / (2.0 * n_target);
    const double rho = std::sqrt(1.0 - lam * lam);
    DipoleEndpoints e;
    e.xi = Vector3(0.0, rho, lam);
    e.eta = -e.xi;
    e.p_plus = (1.0 - epsilon) * e.xi;
    e.n_plus = (1.0 + epsilon) * e.xi;
    e.p_minus = (1.0 + epsilon) * e.eta;
    e.n_minus = (1.0 - epsilon) * e.eta;
    out.push_back(e);
  }
  return out;
}

std::pair<double, double> tube_z_extent(double lambda, double epsilon) {
  return {(1.0 - epsilon) * lambda - epsilon, (1.0 + epsilon) * lambda + epsilon};
}

BoundaryData build_boundary_data(int n_target, double epsilon, double h,
                                 const BoundaryDataOptions& opts) {
  if (opts.m < 3)
    fail(ErrorCode::InvalidArgument,
         "chains need at least 3 cubes to stay inside the eps tubes");
  if (!(opts.alpha_ratio > 0.0 && opts.alpha_ratio < 0.5))
    fail(ErrorCode::InvalidArgument, "alpha_ratio must lie in (0, 1/2)");

  BoundaryData bd;
  bd.n_target = n_target;
  bd.epsilon = epsilon;
  bd.h = h;
  bd.endpoints = boundary_dipole_endpoints(n_target, epsilon);
  bd.energy_budget = M_PI / n_target;
  bd.linear_bound = (64.0 * M_PI * 4.0 * n_target + 1.0) * epsilon;

  // Consecutive upper tubes must keep 1 / (4 n_target) of z-room, and the
  // innermost tube must clear the equator plane (which separates the upper
  // family from its mirror) by the same margin.
  const double need = 1.0 / (4.0 * n_target);
  double min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_target; ++i) {
    const double lo_next = tube_z_extent((i + 1) / (2.0 * n_target), epsilon).first;
    const double hi_prev =
        i == 0 ? 0.0 : tube_z_extent(i / (2.0 * n_target), epsilon).second;
    min_gap = std::min(min_gap, lo_next - hi_prev);
  }
  bd.min_tube_gap = min_gap;
  if (!(min_gap >= need))
    fail(ErrorCode::SeparationViolated,
         "tube z-gap " + std::to_string(min_gap) + " is below the required " +
             std::to_string(need) + "; reduce epsilon");

  const double a = epsilon / (opts.m - 1);  // chain half-width for d = 2 eps
  const double alpha = opts.alpha_ratio * a;

  GridDomain dom = make_ball_domain(Vector3::Zero(), 2.0, h);
  FlipBase base;
  CosseratField cur = make_field(dom, base);

  for (const DipoleEndpoints& e : bd.endpoints) {
    const std::pair<Vector3, Vector3> chains[2] = {{e.p_plus, e.n_plus},
                                                   {e.p_minus, e.n_minus}};
    for (const auto& [P, N] : chains) {
      InsertDipoleResult res = insert_dipole(cur, P, N, opts.m, alpha, opts.dipole);
      cur = std::move(res.field);
      bd.dipoles.push_back(std::move(res.construction));
    }
  }

  // The tubes are pairwise disjoint and the base has zero energy everywhere,
  // so each chain can be audited against the analytic base and the totals
  // summed; the clipped pass keeps the part inside the unit ball.
  DipoleAuditOptions aopts;
  aopts.n_core = opts.dipole.n_core;
  aopts.n_annulus = opts.dipole.n_annulus;
  aopts.n_theta = opts.dipole.n_theta;
  aopts.fd_step_rel = opts.dipole.fd_step_rel;
  DipoleAuditOptions copts = aopts;
  copts.clip = true;
  copts.clip_center = Vector3::Zero();
  copts.clip_radius = 1.0;
  for (const DipoleConstruction& con : bd.dipoles) {
    bd.audits.push_back(audit_dipole_energy(con, base, aopts));
    bd.chain_energy += bd.audits.back().total;
    bd.unit_ball_per_chain.push_back(audit_dipole_energy(con, base, copts).total);
    bd.unit_ball_energy += bd.unit_ball_per_chain.back();
  }
  if (!(bd.unit_ball_energy < bd.energy_budget)) {
    const double eps_max = epsilon * bd.energy_budget / bd.unit_ball_energy;
    fail(ErrorCode::EpsilonTooLarge,
         "unit-ball energy " + std::to_string(bd.unit_ball_energy) +
             " exceeds the budget pi / " + std::to_string(n_target) + " = " +
             std::to_string(bd.energy_budget) +
             "; the cost scales linearly with eps, so eps below about " +
             std::to_string(eps_max) + " is admissible");
  }

  if (opts.with_ledgers)
    for (const DipoleConstruction& con : bd.dipoles)
      bd.ledgers.push_back(dipole_degree_ledger(con, base, 0.5, opts.degree));

  bd.trace_patch =
      make_sphere_patch(Vector3::Zero(), 1.0, opts.trace_polar, opts.trace_azimuth);
  FieldInterpolator interp(cur);
  bd.trace = sample_patch(bd.trace_patch, interp);
  DegreeResult deg =
      surface_degree(star_sphere(Vector3::Zero(), 1.0),
                     [&interp](const Vector3& x) { return interp.director(x); },
                     opts.degree);
  bd.trace_mod2 = deg.mod2;
  bd.trace_lift_degree = deg.degree;

  bd.g_tilde = std::move(cur);
  return bd;
}

}  // namespace cosserat
