#pragma once

#include <string>
#include <vector>

#include "cosserat/energy.hpp"
#include "cosserat/singularities.hpp"
#include "cosserat/trisurface.hpp"

namespace cosserat {

struct SliceOptions {
  double disc_budget = 4.0 * 3.14159265358979323846;     // admissibility threshold
  double sphere_measure = 2.0 * 3.14159265358979323846;  // reported area threshold
  DegreeOptions degree;        // slice boundary degree measurement
  double probe_radius = 0.0;   // singularity probe radius; 0 picks 2h
  SingularityOptions singles;  // forwarded to find_singularities
  MaterialConstants constants;  // volume energy weights for the audit
};

// One horizontal disc chosen inside a tube-free z-band.
struct DiscReport {
  double mu = 0.0;               // chosen level
  double band_lo = 0.0;          // admissible band searched
  double band_hi = 0.0;
  double energy = 0.0;           // in-plane |DR|^2 over the disc
  double jacobian_upper = 0.0;   // energy / 2, the area bound of the text
  double jacobian_direct = 0.0;  // 8 x swept director area, same units
  bool admissible = false;       // energy below the disc budget
};

struct SliceReport {
  std::vector<double> lambdas;  // ladder heights i / (2 n_target)
  std::vector<DiscReport> discs;  // n_target + 1 entries, levels mu_0 .. mu_N
  std::vector<int> slice_mod2;    // director degree parity on each slice boundary
  std::vector<int> singularities_per_slice;
  double measure_threshold = 0.0;
};

// Convex region {x in ball : z_lo < z < z_hi} as a star surface about the
// midpoint of its axis section.
StarSurface star_slab_ball(const Vector3& center, double radius, double z_lo,
                           double z_hi);

// Disc levels, slice boundary degrees and per-slice singularity counts for a
// field on a ball carrying the 2 n_target chain construction. Each band
// between consecutive tubes is scanned at grid resolution for the disc of
// least energy; a band whose best disc still exceeds the budget (or which
// admits no disc at all) raises NoAdmissibleDisc with the best value found.
SliceReport slice_diagnostics(const CosseratField& f, int n_target, double epsilon,
                              const SliceOptions& opts = {});

struct AuditCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
};

struct MinimizerAudit {
  std::vector<AuditCheck> checks;
  bool pass = false;  // conjunction of the checks
};

// Post-minimization report: total energy against pi / n_target and the
// existence of the n_target + 1 low-energy discs. Failures are recorded, not
// thrown.
MinimizerAudit minimizer_energy_audit(const CosseratField& f, int n_target,
                                      double epsilon, const SliceOptions& opts = {});

}  // namespace cosserat
