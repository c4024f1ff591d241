#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cosserat/energy.hpp"

namespace cosserat {

// Partial derivatives of the discrete energy with respect to the raw nodal
// values, h^3 quadrature weight included. The director entries are embedded
// (unprojected) derivatives, so they can be checked against finite
// differences directly; project onto the tangent space before stepping.
struct EnergyGradient {
  std::vector<Vector3> phi;
  std::vector<Vector3> n;
};

EnergyGradient energy_gradient(const CosseratField& f, const MaterialConstants& c);

enum class StepRule { Fixed, Backtracking };

struct SolverConfig {
  int max_iters = 500;
  double step_size = 1.0;  // initial trial step; line search takes it from there
  StepRule step_rule = StepRule::Backtracking;
  double bt_beta = 0.5;  // step shrink factor
  double bt_c = 1e-4;    // Armijo slope fraction
  double grad_tol = 1e-6;
  double energy_tol = 1e-10;  // stall threshold over the stall window
  int stall_window = 50;
  long seed = 0;  // reserved for randomized perturbations; descent itself is
                  // deterministic
  int threads = 1;
  MaterialConstants constants;
  // Observer invoked every audit_every iterations on the current iterate
  // (degree audits, progress logging); never mutates the field.
  int audit_every = 0;
  std::function<void(int iter, const CosseratField&)> audit;
};

struct TraceRow {
  int iter = 0;
  double energy = 0.0;
  double deformation = 0.0;
  double curvature = 0.0;
  double grad_norm = 0.0;  // measured before the iteration's updates
  double step = 0.0;       // smaller of the two accepted phase steps
};

enum class StopReason { GradientTolerance, EnergyStall, MaxIterations };

const char* stop_reason_name(StopReason r);

struct MinimizeResult {
  CosseratField field;
  std::vector<TraceRow> trace;
  double initial_energy = 0.0;
  double final_energy = 0.0;
  int iterations = 0;
  StopReason reason = StopReason::MaxIterations;
};

// Boundary values for the descent; full-lattice arrays of which only the
// entries at dirichlet-flagged nodes are consulted.
struct DirichletValues {
  std::vector<Vector3> phi;
  std::vector<Vector3> n;
};

DirichletValues extract_dirichlet(const CosseratField& f);

// Alternating projected gradient descent on the discrete energy: an
// unconstrained phi step, then a tangentially projected director step with
// renormalization, each under (by default) Armijo backtracking. Only
// interior nodes move; boundary and padding nodes keep their bits. Stops on
// grad_tol, on an energy decrease below energy_tol over stall_window
// iterations, or at max_iters. Throws BoundaryMismatch when init disagrees
// with the dirichlet values at a flagged node and NumericalBlowup when the
// energy stops being finite.
MinimizeResult minimize_restricted(const CosseratField& init,
                                   const DirichletValues& dirichlet,
                                   const SolverConfig& cfg = {});

}  // namespace cosserat
