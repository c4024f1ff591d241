#include "cosserat/minimize.hpp"

#include <cmath>
#include <utility>

namespace cosserat {

namespace {

// Derivative of the deformation density with respect to A = R^T Dphi - I:
// the weighted parts of A are mutually orthogonal, so each contributes its
// own squared weight.
Matrix3 defo_derivative(const Matrix3& A, const MaterialConstants& c) {
  if (c.mu1 == 1.0 && c.muc == 1.0 && c.mu2 == 1.0) return 2.0 * A;
  Matrix3 sym = 0.5 * (A + A.transpose());
  const double tr = A.trace();
  Matrix3 dev = sym - (tr / 3.0) * Matrix3::Identity();
  Matrix3 skew = 0.5 * (A - A.transpose());
  return 2.0 * c.mu1 * dev + 2.0 * c.muc * skew +
         (2.0 * c.mu2 / 3.0) * tr * Matrix3::Identity();
}

}  // namespace

EnergyGradient energy_gradient(const CosseratField& f, const MaterialConstants& c) {
  c.validate();
  const GridDomain& d = f.domain;
  const double inv2h = 0.5 / d.h;
  const double w = d.h * d.h * d.h;
  const double cw = w * inv2h;  // weight of a +-neighbor stencil entry

  EnergyGradient g;
  g.phi.assign(d.size(), Vector3::Zero());
  g.n.assign(d.size(), Vector3::Zero());

  const std::size_t strides[3] = {static_cast<std::size_t>(d.ny) * d.nz,
                                  static_cast<std::size_t>(d.nz), 1};
  const std::size_t total = d.size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (static_cast<NodeClass>(d.node_class[idx]) != NodeClass::Interior) continue;
    const Vector3& n0 = f.n[idx];
    Matrix3 Dphi, Dn;
    for (int a = 0; a < 3; ++a) {
      Dphi.col(a) = (f.phi[idx + strides[a]] - f.phi[idx - strides[a]]) * inv2h;
      Dn.col(a) = (f.n[idx + strides[a]] - f.n[idx - strides[a]]) * inv2h;
    }
    Matrix3 R = 2.0 * (n0 * n0.transpose()) - Matrix3::Identity();
    Matrix3 A = R.transpose() * Dphi - Matrix3::Identity();
    Matrix3 W = defo_derivative(A, c);
    Matrix3 RW = R * W;
    Matrix3 Dn_tan = Dn - n0 * (n0.transpose() * Dn);

    // chain factor of the curvature density lambda * (8 |Dn_tan|^2)^{p/2}
    double chi = c.lambda;
    if (c.p != 2.0) {
      const double s = 8.0 * Dn_tan.squaredNorm();
      chi = (s > 0.0) ? c.lambda * 0.5 * c.p * std::pow(s, 0.5 * c.p - 1.0) : 0.0;
    }

    for (int a = 0; a < 3; ++a) {
      g.phi[idx + strides[a]] += cw * RW.col(a);
      g.phi[idx - strides[a]] -= cw * RW.col(a);
      const Vector3 tg = 16.0 * chi * Dn_tan.col(a);
      g.n[idx + strides[a]] += cw * tg;
      g.n[idx - strides[a]] -= cw * tg;
    }
    Matrix3 M = W * Dphi.transpose();
    Vector3 self = 2.0 * ((M + M.transpose()) * n0);
    for (int a = 0; a < 3; ++a) self -= 16.0 * chi * n0.dot(Dn.col(a)) * Dn.col(a);
    g.n[idx] += w * self;
  }
  return g;
}

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::GradientTolerance:
      return "gradient_tolerance";
    case StopReason::EnergyStall:
      return "energy_stall";
    case StopReason::MaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

DirichletValues extract_dirichlet(const CosseratField& f) {
  DirichletValues b;
  b.phi = f.phi;
  b.n = f.n;
  return b;
}

namespace {

void check_config(const SolverConfig& cfg) {
  if (cfg.max_iters < 0) fail(ErrorCode::InvalidArgument, "max_iters must be >= 0");
  if (!(cfg.step_size > 0.0))
    fail(ErrorCode::InvalidArgument, "step_size must be positive");
  if (!(cfg.grad_tol > 0.0) || !(cfg.energy_tol > 0.0))
    fail(ErrorCode::InvalidArgument, "tolerances must be positive");
  if (cfg.stall_window < 1)
    fail(ErrorCode::InvalidArgument, "stall_window must be >= 1");
  if (!(cfg.bt_beta > 0.0 && cfg.bt_beta < 1.0) || !(cfg.bt_c > 0.0 && cfg.bt_c < 1.0))
    fail(ErrorCode::InvalidArgument, "backtracking parameters must lie in (0, 1)");
}

}  // namespace

MinimizeResult minimize_restricted(const CosseratField& init,
                                   const DirichletValues& dirichlet,
                                   const SolverConfig& cfg) {
  check_config(cfg);
  init.validate();
  const GridDomain& d = init.domain;
  if (dirichlet.phi.size() != d.size() || dirichlet.n.size() != d.size())
    fail(ErrorCode::BoundaryMismatch, "dirichlet arrays do not match the lattice");
  for (std::size_t idx = 0; idx < d.size(); ++idx) {
    if (!init.dirichlet[idx]) continue;
    if ((dirichlet.phi[idx] - init.phi[idx]).norm() != 0.0 ||
        (dirichlet.n[idx] - init.n[idx]).norm() != 0.0)
      fail(ErrorCode::BoundaryMismatch,
           "init disagrees with the dirichlet values at a pinned node");
  }

  std::vector<std::size_t> free_nodes;
  for (std::size_t idx = 0; idx < d.size(); ++idx)
    if (static_cast<NodeClass>(d.node_class[idx]) == NodeClass::Interior)
      free_nodes.push_back(idx);

  MinimizeResult out;
  out.field = init;
  CosseratField& cur = out.field;
  CosseratField trial = cur;

  EnergyReport rep = energy(cur, cfg.constants, cfg.threads);
  if (!std::isfinite(rep.total))
    fail(ErrorCode::NumericalBlowup, "energy not finite at iteration 0");
  out.initial_energy = rep.total;

  std::vector<double> history;
  history.reserve(cfg.max_iters + 1);
  history.push_back(rep.total);

  // Line search over one family of values (phi or n). apply writes the trial
  // values for step t; on success cur takes the trial values and the energy
  // report is refreshed. Returns the accepted step, 0 when none descends.
  double E = rep.total;
  auto line_search = [&](const std::function<void(double)>& apply,
                         std::vector<Vector3> CosseratField::*member, double slope,
                         double warm) -> double {
    if (slope == 0.0) return 0.0;
    double t = warm;
    for (int tries = 0; tries < 80; ++tries) {
      apply(t);
      EnergyReport er = energy(trial, cfg.constants, cfg.threads);
      // a fixed-rule step is taken as is; divergence surfaces as
      // NumericalBlowup at the iteration check rather than a silent stall
      const bool ok = cfg.step_rule == StepRule::Fixed ||
                      (std::isfinite(er.total) && er.total <= E - cfg.bt_c * t * slope);
      if (ok) {
        cur.*member = trial.*member;
        rep = er;
        E = er.total;
        return t;
      }
      if (cfg.step_rule == StepRule::Fixed) break;
      t *= cfg.bt_beta;
    }
    trial.*member = cur.*member;  // roll the trial buffer back
    return 0.0;
  };

  double warm_phi = cfg.step_size, warm_n = cfg.step_size;
  int it = 0;
  StopReason reason = StopReason::MaxIterations;
  std::vector<Vector3> dir_phi(free_nodes.size()), dir_n(free_nodes.size());

  while (it < cfg.max_iters) {
    EnergyGradient g = energy_gradient(cur, cfg.constants);
    double slope_phi = 0.0, slope_n = 0.0;
    for (std::size_t k = 0; k < free_nodes.size(); ++k) {
      const std::size_t idx = free_nodes[k];
      dir_phi[k] = g.phi[idx];
      slope_phi += dir_phi[k].squaredNorm();
      const Vector3& n0 = cur.n[idx];
      dir_n[k] = g.n[idx] - n0 * n0.dot(g.n[idx]);
      slope_n += dir_n[k].squaredNorm();
    }
    const double grad_norm = std::sqrt(slope_phi + slope_n);
    if (grad_norm < cfg.grad_tol) {
      reason = StopReason::GradientTolerance;
      break;
    }
    ++it;

    const double t_phi = line_search(
        [&](double t) {
          for (std::size_t k = 0; k < free_nodes.size(); ++k)
            trial.phi[free_nodes[k]] = cur.phi[free_nodes[k]] - t * dir_phi[k];
        },
        &CosseratField::phi, slope_phi, warm_phi);
    if (t_phi > 0.0) warm_phi = 2.0 * t_phi;

    // refresh the director gradient at the updated deformation
    if (t_phi > 0.0) {
      EnergyGradient gn = energy_gradient(cur, cfg.constants);
      slope_n = 0.0;
      for (std::size_t k = 0; k < free_nodes.size(); ++k) {
        const std::size_t idx = free_nodes[k];
        const Vector3& n0 = cur.n[idx];
        dir_n[k] = gn.n[idx] - n0 * n0.dot(gn.n[idx]);
        slope_n += dir_n[k].squaredNorm();
      }
    }
    const double t_n = line_search(
        [&](double t) {
          for (std::size_t k = 0; k < free_nodes.size(); ++k) {
            const std::size_t idx = free_nodes[k];
            trial.n[idx] = (cur.n[idx] - t * dir_n[k]).normalized();
          }
        },
        &CosseratField::n, slope_n, warm_n);
    if (t_n > 0.0) warm_n = 2.0 * t_n;

    if (!std::isfinite(E))
      fail(ErrorCode::NumericalBlowup,
           "energy not finite at iteration " + std::to_string(it));

    out.trace.push_back({it, E, rep.deformation, rep.curvature, grad_norm,
                         std::min(t_phi, t_n)});
    if (cfg.audit && cfg.audit_every > 0 && it % cfg.audit_every == 0)
      cfg.audit(it, cur);
    history.push_back(E);
    if (t_phi == 0.0 && t_n == 0.0) {
      reason = StopReason::EnergyStall;  // no descent direction at this scale
      break;
    }
    if (static_cast<int>(history.size()) > cfg.stall_window &&
        history[history.size() - 1 - cfg.stall_window] - E < cfg.energy_tol) {
      reason = StopReason::EnergyStall;
      break;
    }
  }

  out.iterations = it;
  out.final_energy = E;
  out.reason = reason;
  return out;
}

}  // namespace cosserat
