#pragma once

#include <vector>

#include "cosserat/so3.hpp"

namespace cosserat {

struct LiftOptions {
  // Two adjacent axes closer than this to perpendicular cannot be matched.
  double guard_deg = 80.0;
  int seed = 0;
  int seed_sign = +1;
};

// Chooses signs for a collection of axis lines so adjacent entries vary
// continuously: a discrete lift of an axis-rotation field through the double
// cover. BFS from the seed in deterministic order; each new node takes the
// sign suggested by its strongest already-lifted neighbor and every other
// strong neighbor must agree.
// Throws AmbiguousLift when a needed comparison is under the guard angle and
// LiftObstruction when strong neighbors contradict (the field is genuinely
// non-orientable over this graph).
std::vector<Vector3> lift_axes(const std::vector<Vector3>& axes,
                               const std::vector<std::vector<int>>& adjacency,
                               const LiftOptions& opts = {});

// Convenience: extract axes from pi-rotations first.
std::vector<Vector3> lift_rotations(const std::vector<Matrix3>& rotations,
                                    const std::vector<std::vector<int>>& adjacency,
                                    const LiftOptions& opts = {});

}  // namespace cosserat
