#include "cosserat/lift.hpp"

#include <cmath>
#include <deque>

namespace cosserat {

std::vector<Vector3> lift_axes(const std::vector<Vector3>& axes,
                               const std::vector<std::vector<int>>& adjacency,
                               const LiftOptions& opts) {
  const int n = static_cast<int>(axes.size());
  if (adjacency.size() != axes.size())
    fail(ErrorCode::InvalidArgument, "adjacency does not match the axis list");
  if (opts.seed < 0 || opts.seed >= n)
    fail(ErrorCode::InvalidArgument, "lift seed out of range");
  const double guard = std::cos(opts.guard_deg * 3.14159265358979323846 / 180.0);

  std::vector<int> sign(axes.size(), 0);
  sign[opts.seed] = (opts.seed_sign >= 0) ? 1 : -1;
  std::deque<int> queue{opts.seed};
  int visited = 1;
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    for (int j : adjacency[i]) {
      if (j < 0 || j >= n) fail(ErrorCode::InvalidArgument, "adjacency index out of range");
      if (sign[j] != 0) continue;
      // decide j from its strongest already-lifted neighbor
      double best = 0.0;
      int best_sign = 0;
      for (int k : adjacency[j]) {
        if (k < 0 || k >= n || sign[k] == 0) continue;
        double dot = axes[j].dot(sign[k] * axes[k]);
        if (std::abs(dot) > std::abs(best)) {
          best = dot;
          best_sign = dot >= 0.0 ? 1 : -1;
        }
      }
      if (std::abs(best) < guard)
        fail(ErrorCode::AmbiguousLift,
             "adjacent axes too close to perpendicular to choose a sign");
      // all other strong neighbors must agree with the choice
      for (int k : adjacency[j]) {
        if (k < 0 || k >= n || sign[k] == 0) continue;
        double dot = axes[j].dot(sign[k] * axes[k]);
        if (std::abs(dot) >= guard && (dot >= 0.0 ? 1 : -1) != best_sign)
          fail(ErrorCode::LiftObstruction,
               "sign choice contradicts a strongly matched neighbor");
      }
      sign[j] = best_sign;
      ++visited;
      queue.push_back(j);
    }
  }
  if (visited != n)
    fail(ErrorCode::InvalidArgument, "adjacency graph is not connected");

  std::vector<Vector3> out(axes.size());
  for (std::size_t i = 0; i < axes.size(); ++i) out[i] = sign[i] * axes[i];
  return out;
}

std::vector<Vector3> lift_rotations(const std::vector<Matrix3>& rotations,
                                    const std::vector<std::vector<int>>& adjacency,
                                    const LiftOptions& opts) {
  std::vector<Vector3> axes(rotations.size());
  for (std::size_t i = 0; i < rotations.size(); ++i) axes[i] = axis_of(rotations[i]);
  return lift_axes(axes, adjacency, opts);
}

}  // namespace cosserat
