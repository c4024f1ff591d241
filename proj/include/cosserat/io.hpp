#pragma once

#include <string>

#include "cosserat/field.hpp"

namespace cosserat {

// Binary field container, little-endian:
//   magic "CSRF1" | shape tag u8 | bounding box 6 f64 | h f64 | dims 3 u32 |
//   phi (3 f64 per node) | n (3 f64 per node) | mask (1 u8 per node)
// Nodes are row-major, index (i,j,k) -> (i*ny + j)*nz + k. The bounding box
// is the shape box ([center - r, center + r] for balls); the node lattice is
// reconstructed from it deterministically. Dirichlet flags are re-derived as
// the Boundary class on load. Round trips are byte-identical.
void save_field(const CosseratField& f, const std::string& path);
CosseratField load_field(const std::string& path);

// Legacy-VTK ASCII structured-points export with phi and director as point
// vectors and the node class as a scalar.
void export_vtk(const CosseratField& f, const std::string& path);

}  // namespace cosserat
