#pragma once

#include <array>
#include <string>
#include <vector>

#include "cosserat/field.hpp"

namespace cosserat {

struct EnergyReport {
  double deformation = 0.0;
  double curvature = 0.0;
  double total = 0.0;
  std::size_t nodes = 0;  // quadrature nodes that contributed
};

// Midpoint quadrature of the energy density over all Interior nodes, weight
// h^3 each. Central differences in every direction (the interior class
// guarantees the six neighbors). Deterministic for any thread count.
EnergyReport energy(const CosseratField& f, const MaterialConstants& c, int threads = 1);

// One-sided / central difference stencils at a single node (central whenever
// both axis neighbors are in the shape). Returns the raw Dphi columns and the
// tangentially projected director derivative columns.
struct NodeGradient {
  Matrix3 Dphi;     // column d = d phi / d x_d
  Matrix3 Dn_tan;   // column d = (I - n n^T) d n / d x_d
};
NodeGradient node_gradient(const CosseratField& f, int i, int j, int k);

// Curvature-type diagnostics of the director field on the horizontal disc
// {z = z_level} inside a ball domain, evaluated on the disc's own 2D grid of
// spacing h via trilinear interpolation.
//   dirichlet_full : integral of |DR|^2 restricted to the two in-plane
//                    directions (the full-rotation Dirichlet density)
//   jacobian_area  : integral of |n_x x n_y|, the unnormalized area swept on
//                    the unit sphere
struct DiscMetrics {
  double dirichlet_full = 0.0;
  double jacobian_area = 0.0;
  double disc_radius = 0.0;
  std::size_t nodes = 0;
};
DiscMetrics disc_metrics(const CosseratField& f, double z_level);

// Convenience wrapper returning only the Dirichlet integral.
double disc_energy(const CosseratField& f, double z_level);

}  // namespace cosserat
