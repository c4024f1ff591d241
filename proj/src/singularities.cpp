#include "cosserat/singularities.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "cosserat/errors.hpp"
#include "cosserat/lift.hpp"
#include "cosserat/trisurface.hpp"

namespace cosserat {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Canonical line representative: first significant component positive.
Vector3 canonical_axis(const Vector3& n) {
  for (int c = 0; c < 3; ++c) {
    if (std::abs(n[c]) > 1e-6) return n[c] > 0 ? n : Vector3(-n);
  }
  return n;
}

struct Cluster {
  std::vector<std::array<int, 3>> cells;
  Vector3 centroid = Vector3::Zero();
};

std::vector<Cluster> flag_and_cluster(const CosseratField& f, double dot_floor) {
  const GridDomain& d = f.domain;
  const int cx = d.nx - 1, cy = d.ny - 1, cz = d.nz - 1;
  auto cell_id = [&](int i, int j, int k) { return (i * cy + j) * cz + k; };
  std::vector<std::uint8_t> flagged(std::size_t(cx) * cy * cz, 0);

  for (int i = 0; i < cx; ++i)
    for (int j = 0; j < cy; ++j)
      for (int k = 0; k < cz; ++k) {
        const Vector3* corners[8];
        bool usable = true;
        int c = 0;
        for (int di = 0; di < 2 && usable; ++di)
          for (int dj = 0; dj < 2 && usable; ++dj)
            for (int dk = 0; dk < 2; ++dk) {
              if (d.cls(i + di, j + dj, k + dk) == NodeClass::Outside) {
                usable = false;
                break;
              }
              corners[c++] = &f.n[d.index(i + di, j + dj, k + dk)];
            }
        if (!usable) continue;
        double min_dot = 1.0;
        for (int a = 0; a < 8; ++a)
          for (int b = a + 1; b < 8; ++b)
            min_dot = std::min(min_dot, std::abs(corners[a]->dot(*corners[b])));
        if (min_dot < dot_floor) flagged[cell_id(i, j, k)] = 1;
      }

  // group flagged cells that touch, including diagonally
  std::vector<Cluster> out;
  std::vector<std::uint8_t> seen(flagged.size(), 0);
  for (int i = 0; i < cx; ++i)
    for (int j = 0; j < cy; ++j)
      for (int k = 0; k < cz; ++k) {
        std::size_t id0 = cell_id(i, j, k);
        if (!flagged[id0] || seen[id0]) continue;
        Cluster cl;
        std::deque<std::array<int, 3>> queue{{i, j, k}};
        seen[id0] = 1;
        while (!queue.empty()) {
          auto [a, b, cc] = queue.front();
          queue.pop_front();
          cl.cells.push_back({a, b, cc});
          for (int da = -1; da <= 1; ++da)
            for (int db = -1; db <= 1; ++db)
              for (int dc = -1; dc <= 1; ++dc) {
                int na = a + da, nb = b + db, nc = cc + dc;
                if (na < 0 || nb < 0 || nc < 0 || na >= cx || nb >= cy ||
                    nc >= cz)
                  continue;
                std::size_t id = cell_id(na, nb, nc);
                if (flagged[id] && !seen[id]) {
                  seen[id] = 1;
                  queue.push_back({na, nb, nc});
                }
              }
        }
        Vector3 sum = Vector3::Zero();
        for (const auto& cell : cl.cells)
          sum += d.position(cell[0], cell[1], cell[2]) +
                 0.5 * d.h * Vector3(1, 1, 1);
        cl.centroid = sum / double(cl.cells.size());
        out.push_back(std::move(cl));
      }
  return out;
}

DegreeOptions probe_options(const SingularityOptions& opts) {
  DegreeOptions dopts;
  dopts.focus_dirs = opts.focus_dirs;
  dopts.focus_arc = opts.focus_arc;
  return dopts;
}

}  // namespace

std::vector<SingularPoint> find_singularities(const CosseratField& f,
                                              double probe_radius,
                                              const SingularityOptions& opts) {
  const GridDomain& d = f.domain;
  if (probe_radius < 2.0 * d.h - 1e-12)
    fail(ErrorCode::InvalidArgument,
         "probe radius must span at least two grid cells");
  if (opts.flag_angle_deg <= 0.0 || opts.flag_angle_deg >= 180.0)
    fail(ErrorCode::InvalidArgument, "flag angle must lie in (0, 180)");
  // relative rotation angle between the axis rotations of directors a, b is
  // 2*acos|a.b|, so the angle threshold becomes a dot-product floor
  const double dot_floor = std::cos(0.5 * opts.flag_angle_deg * kPi / 180.0);

  std::vector<Cluster> clusters = flag_and_cluster(f, dot_floor);
  std::vector<SingularPoint> points(clusters.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    points[c].location = clusters[c].centroid;
    points[c].cluster_size = int(clusters[c].cells.size());
    points[c].probe_radius = probe_radius;
  }
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b)
      if ((points[a].location - points[b].location).norm() <
          2.0 * probe_radius) {
        points[a].ambiguous_separation = true;
        points[b].ambiguous_separation = true;
      }

  FieldInterpolator interp(f);
  auto director_at = [&](const Vector3& x) { return interp.director(x); };
  auto rotation_at = [&](const Vector3& x) {
    return cover(interp.director(x).normalized());
  };
  for (SingularPoint& p : points) {
    if (p.ambiguous_separation) continue;
    // shrink the probe if the sphere pokes out of the domain or grazes more
    // of the singular set than the centroid accounts for
    bool done = false;
    Error last(ErrorCode::Internal, "unset");
    for (double scale : {1.0, 0.75, 0.5}) {
      double r = probe_radius * scale;
      if (r < 2.0 * d.h) break;
      try {
        DegreeOptions dopts = probe_options(opts);
        p.lift_degree =
            surface_degree(star_sphere(p.location, r), director_at, dopts)
                .degree;
        p.mod2 = mod2_degree_at(rotation_at, p.location, r, dopts).first;
        p.probe_radius = r;
        done = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::OutsideDomain &&
            e.code() != ErrorCode::AmbiguousLift)
          throw;
        last = e;
        continue;
      }
      break;
    }
    if (!done) {
      if (last.code() == ErrorCode::AmbiguousLift) throw last;
      // probe sphere cannot fit inside the domain: report the location only
      p.degrees_available = false;
      continue;
    }
    if (((p.lift_degree % 2) + 2) % 2 != p.mod2)
      fail(ErrorCode::DegreeUnresolved,
           "director degree parity disagrees with the lifted mod-2 degree");
    p.degrees_available = true;
  }
  return points;
}

namespace {

// Membership in the capped cylinder: radius r around segment [P,N], extended
// by r beyond both endpoints.
struct CappedCylinder {
  Vector3 P, axis;
  double length, radius;

  bool contains(const Vector3& x) const {
    Vector3 rel = x - P;
    double t = rel.dot(axis);
    if (t < -radius || t > length + radius) return false;
    return (rel - t * axis).squaredNorm() <= radius * radius;
  }
};

}  // namespace

DipoleRecord verify_dipole(const CosseratField& f, const Vector3& P,
                           const Vector3& N, double cylinder_radius,
                           const SingularityOptions& opts) {
  const GridDomain& d = f.domain;
  DipoleRecord rec;
  rec.P = P;
  rec.N = N;
  rec.cylinder_radius = cylinder_radius;

  const double sep = (N - P).norm();
  if (sep <= 0.0) fail(ErrorCode::InvalidArgument, "dipole endpoints coincide");
  if (cylinder_radius <= 0.0)
    fail(ErrorCode::InvalidArgument, "cylinder radius must be positive");
  double probe = std::min(0.3 * sep, 0.75 * cylinder_radius);
  if (probe < 2.0 * d.h)
    fail(ErrorCode::ResolutionTooCoarse,
         "dipole endpoints too close together for this grid spacing");
  rec.probe_radius = probe;

  CappedCylinder zone{P, (N - P) / sep, sep, cylinder_radius};

  // (i) the capped cylinder must stay inside the meshed shape
  rec.geometry_ok = true;
  Vector3 lo = P.cwiseMin(N) - Vector3::Constant(cylinder_radius);
  Vector3 hi = P.cwiseMax(N) + Vector3::Constant(cylinder_radius);
  const int nn[3] = {d.nx, d.ny, d.nz};
  for (int c = 0; c < 3 && rec.geometry_ok; ++c) {
    double lat_lo = d.node_lo[c], lat_hi = d.node_lo[c] + d.h * (nn[c] - 1);
    if (lo[c] < lat_lo - 1e-12 || hi[c] > lat_hi + 1e-12)
      rec.geometry_ok = false;
  }
  if (rec.geometry_ok) {
    for (int i = 0; i < d.nx && rec.geometry_ok; ++i)
      for (int j = 0; j < d.ny && rec.geometry_ok; ++j)
        for (int k = 0; k < d.nz; ++k) {
          if (d.cls(i, j, k) == NodeClass::Outside &&
              zone.contains(d.position(i, j, k))) {
            rec.geometry_ok = false;
            break;
          }
        }
  }
  if (!rec.geometry_ok) return rec;

  // (ii) singular set inside the cylinder is exactly {P, N} up to grid blur
  std::vector<SingularPoint> sings = find_singularities(f, probe, opts);
  const double match_tol = 2.0 * d.h;
  bool found_P = false, found_N = false, stray = false;
  for (const SingularPoint& s : sings) {
    if (!zone.contains(s.location)) continue;
    if ((s.location - P).norm() <= match_tol)
      found_P = true;
    else if ((s.location - N).norm() <= match_tol)
      found_N = true;
    else
      stray = true;
  }
  rec.interior_clean = found_P && found_N && !stray;

  // (iii) endpoint mod-2 degrees from rotation lifts on probe spheres
  FieldInterpolator interp(f);
  auto rotation_at = [&](const Vector3& x) {
    return cover(interp.director(x).normalized());
  };
  DegreeOptions dopts = probe_options(opts);
  int m2P = mod2_degree_at(rotation_at, P, probe, dopts).first;
  int m2N = mod2_degree_at(rotation_at, N, probe, dopts).first;
  rec.endpoint_mod2_ok = (m2P == 1 && m2N == 1);

  if (!rec.interior_clean) return rec;

  // One breadth-first lift over the punctured cylinder fixes a common sign
  // gauge for both endpoint spheres; opposite integer degrees there are what
  // distinguishes a dipole from two like-oriented point defects.
  const double hole = 0.35 * probe;
  std::vector<std::size_t> nodes;
  std::unordered_map<std::size_t, int> slot;
  for (int i = 0; i < d.nx; ++i)
    for (int j = 0; j < d.ny; ++j)
      for (int k = 0; k < d.nz; ++k) {
        Vector3 x = d.position(i, j, k);
        if (!zone.contains(x)) continue;
        if ((x - P).norm() <= hole || (x - N).norm() <= hole) continue;
        std::size_t id = d.index(i, j, k);
        slot[id] = int(nodes.size());
        nodes.push_back(id);
      }
  std::vector<Vector3> axes(nodes.size());
  for (std::size_t s = 0; s < nodes.size(); ++s)
    axes[s] = canonical_axis(f.n[nodes[s]]);
  std::vector<std::vector<int>> adj(nodes.size());
  for (std::size_t s = 0; s < nodes.size(); ++s) {
    std::size_t id = nodes[s];
    std::size_t k = id % d.nz, j = (id / d.nz) % d.ny, i = id / (d.nz * d.ny);
    const int step[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                            {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    for (const auto& dx : step) {
      int ni = int(i) + dx[0], nj = int(j) + dx[1], nk = int(k) + dx[2];
      if (ni < 0 || nj < 0 || nk < 0 || ni >= d.nx || nj >= d.ny || nk >= d.nz)
        continue;
      auto it = slot.find(d.index(ni, nj, nk));
      if (it != slot.end()) adj[s].push_back(it->second);
    }
  }
  LiftOptions lopts;
  std::vector<Vector3> lifted = lift_axes(axes, adj, lopts);
  if (lifted[0].dot(f.n[nodes[0]]) < 0.0)
    for (Vector3& v : lifted) v = -v;

  CosseratField gauged = f;
  for (std::size_t s = 0; s < nodes.size(); ++s) gauged.n[nodes[s]] = lifted[s];
  FieldInterpolator ginterp(gauged);
  auto lifted_dir_at = [&](const Vector3& x) { return ginterp.director(x); };
  rec.lift_degree_P =
      surface_degree(star_sphere(P, probe), lifted_dir_at, dopts).degree;
  rec.lift_degree_N =
      surface_degree(star_sphere(N, probe), lifted_dir_at, dopts).degree;
  rec.degrees_opposite =
      rec.lift_degree_P != 0 && rec.lift_degree_P == -rec.lift_degree_N;

  rec.verified = rec.geometry_ok && rec.interior_clean &&
                 rec.endpoint_mod2_ok && rec.degrees_opposite;
  return rec;
}

int map_degree_phi(const CosseratField& f, const Vector3& a, double r,
                   const Vector3& regular_value) {
  FieldInterpolator interp(f);
  auto dir_at = [&](const Vector3& x) {
    Vector3 delta = interp.deformation(x) - regular_value;
    double len = delta.norm();
    if (len < 1e-6)
      fail(ErrorCode::ValueNotRegular,
           "target value lies on the image of the sphere");
    return Vector3(delta / len);
  };
  return surface_degree(star_sphere(a, r), dir_at).degree;
}

}  // namespace cosserat
