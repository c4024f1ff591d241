#include "cosserat/trisurface.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

namespace cosserat {

namespace {
constexpr double kPi = 3.14159265358979323846;

using Edge = std::pair<int, int>;
Edge edge_key(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

double clamp1(double x) { return std::max(-1.0, std::min(1.0, x)); }

double arc(const Vector3& a, const Vector3& b) { return std::acos(clamp1(a.dot(b))); }
double line_arc(const Vector3& a, const Vector3& b) {
  return std::acos(clamp1(std::abs(a.dot(b))));
}

}  // namespace

std::vector<std::vector<int>> TriMesh::vertex_adjacency() const {
  std::vector<std::set<int>> adj(dirs.size());
  for (const auto& t : tris)
    for (int e = 0; e < 3; ++e) {
      int a = t[e], b = t[(e + 1) % 3];
      adj[a].insert(b);
      adj[b].insert(a);
    }
  std::vector<std::vector<int>> out(dirs.size());
  for (std::size_t i = 0; i < adj.size(); ++i)
    out[i].assign(adj[i].begin(), adj[i].end());
  return out;
}

TriMesh icosphere(int level) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriMesh m;
  m.dirs = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
            {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
            {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (auto& d : m.dirs) d.normalize();
  m.tris = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
            {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
            {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
            {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  // enforce outward orientation regardless of the listing
  for (auto& tri : m.tris) {
    const Vector3 &a = m.dirs[tri[0]], &b = m.dirs[tri[1]], &c = m.dirs[tri[2]];
    if ((b - a).cross(c - a).dot(a + b + c) < 0.0) std::swap(tri[1], tri[2]);
  }
  for (int l = 0; l < level; ++l) {
    std::map<Edge, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = edge_key(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      int idx = static_cast<int>(m.dirs.size());
      m.dirs.push_back((m.dirs[a] + m.dirs[b]).normalized());
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(m.tris.size() * 4);
    for (const auto& tri : m.tris) {
      int ab = mid(tri[0], tri[1]), bc = mid(tri[1], tri[2]), ca = mid(tri[2], tri[0]);
      next.push_back({tri[0], ab, ca});
      next.push_back({tri[1], bc, ab});
      next.push_back({tri[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.tris = std::move(next);
  }
  return m;
}

StarSurface star_sphere(const Vector3& center, double r) {
  if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "sphere radius must be positive");
  StarSurface s;
  s.center = center;
  s.radius = [r](const Vector3&) { return r; };
  return s;
}

StarSurface star_box(const Vector3& lo, const Vector3& hi) {
  if (!((hi - lo).minCoeff() > 0.0))
    fail(ErrorCode::InvalidArgument, "box extents must be positive");
  StarSurface s;
  s.center = 0.5 * (lo + hi);
  const Vector3 half = 0.5 * (hi - lo);
  s.radius = [half](const Vector3& dir) {
    double m = 0.0;
    for (int a = 0; a < 3; ++a) m = std::max(m, std::abs(dir[a]) / half[a]);
    return 1.0 / m;
  };
  return s;
}

int triangulation_degree(const std::vector<Vector3>& values,
                         const std::vector<std::array<int, 3>>& tris,
                         double residual_tol, double* residual_out) {
  double sum = 0.0;
  for (const auto& t : tris) {
    const Vector3 &u = values[t[0]], &v = values[t[1]], &w = values[t[2]];
    const double duv = u.dot(v), dvw = v.dot(w), dwu = w.dot(u);
    if (duv < -1.0 + 1e-8 || dvw < -1.0 + 1e-8 || dwu < -1.0 + 1e-8)
      fail(ErrorCode::DegenerateTriangle,
           "triangle spans nearly antipodal image points");
    // signed solid angle of the spherical triangle (u, v, w)
    sum += 2.0 * std::atan2(u.dot(v.cross(w)), 1.0 + duv + dvw + dwu);
  }
  const double raw = sum / (4.0 * kPi);
  const int deg = static_cast<int>(std::lround(raw));
  const double residual = std::abs(raw - deg);
  if (residual_out) *residual_out = residual;
  if (residual >= residual_tol)
    fail(ErrorCode::DegreeUnresolved, "excess sum is not near an integer multiple");
  return deg;
}

int preimage_degree(const std::vector<Vector3>& values,
                    const std::vector<std::array<int, 3>>& tris, const Vector3& w) {
  if (std::abs(w.norm() - 1.0) > 1e-9)
    fail(ErrorCode::InvalidUnitVector, "preimage target must be a unit vector");
  const double tol = 1e-9;
  int deg = 0;
  for (const auto& t : tris) {
    double d[3];
    for (int e = 0; e < 3; ++e)
      d[e] = w.dot(values[t[e]].cross(values[t[(e + 1) % 3]]));
    // two confidently opposite edge sides: w is outside regardless of the rest
    bool strong_pos = false, strong_neg = false, weak = false;
    for (int e = 0; e < 3; ++e) {
      if (d[e] > tol)
        strong_pos = true;
      else if (d[e] < -tol)
        strong_neg = true;
      else
        weak = true;
    }
    if (strong_pos && strong_neg) continue;
    // the three edge planes carve out the triangle and its antipodal mirror
    // with all signs flipped; only the hemisphere holding the vertices counts
    if (w.dot(values[t[0]] + values[t[1]] + values[t[2]]) <= 0.0) continue;
    if (weak)
      fail(ErrorCode::ValueNotRegular, "target grazes an image edge");
    deg += strong_pos ? 1 : -1;
  }
  return deg;
}

namespace {

struct AdaptiveState {
  TriMesh mesh;
  std::vector<Vector3> samples;  // director (signed) or canonical axis
  bool axis_mode = false;        // arcs measured between lines, not vectors
};

// Image-roughness test for one triangle: edge arcs plus a midpoint-deviation
// probe that catches features thinner than the current triangles. Triangles
// already below the domain floor are never marked; at that scale the sampled
// data has nothing finer to show.
bool needs_refine(const AdaptiveState& st,
                  const std::function<Vector3(const Vector3&)>& sample_dir,
                  const std::array<int, 3>& tri, double max_arc, double floor_arc) {
  double domain_max = 0.0;
  for (int e = 0; e < 3; ++e)
    domain_max = std::max(domain_max, arc(st.mesh.dirs[tri[e]], st.mesh.dirs[tri[(e + 1) % 3]]));
  auto image_arc = [&](const Vector3& a, const Vector3& b) {
    return st.axis_mode ? line_arc(a, b) : arc(a, b);
  };
  bool rough = false;
  for (int e = 0; e < 3 && !rough; ++e) {
    const Vector3 &qa = st.samples[tri[e]], &qb = st.samples[tri[(e + 1) % 3]];
    if (image_arc(qa, qb) > max_arc) rough = true;
  }
  if (!rough) {
    // probe the edge midpoints against the geodesic midpoint of the samples
    for (int e = 0; e < 3 && !rough; ++e) {
      const Vector3& da = st.mesh.dirs[tri[e]];
      const Vector3& db = st.mesh.dirs[tri[(e + 1) % 3]];
      Vector3 qm = sample_dir((da + db).normalized());
      const Vector3 &qa = st.samples[tri[e]], &qb = st.samples[tri[(e + 1) % 3]];
      Vector3 gm = qa + qb;
      if (st.axis_mode && qa.dot(qb) < 0.0) gm = qa - qb;
      if (gm.norm() < 1e-6) {
        rough = true;
        break;
      }
      gm.normalize();
      if (image_arc(qm, gm) > max_arc) rough = true;
    }
  }
  if (!rough) return false;
  return domain_max > floor_arc;
}

void refine_marked(AdaptiveState& st,
                   const std::function<Vector3(const Vector3&)>& sample_dir,
                   const std::vector<char>& tri_marked) {
  // conforming red-green split: marked triangles quarter, neighbors with
  // hanging midpoints bisect (two hung edges promote to a full quarter)
  std::set<Edge> split_edges;
  for (std::size_t i = 0; i < st.mesh.tris.size(); ++i) {
    if (!tri_marked[i]) continue;
    const auto& t = st.mesh.tris[i];
    for (int e = 0; e < 3; ++e) split_edges.insert(edge_key(t[e], t[(e + 1) % 3]));
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& t : st.mesh.tris) {
      Edge es[3] = {edge_key(t[0], t[1]), edge_key(t[1], t[2]), edge_key(t[2], t[0])};
      int cnt = int(split_edges.count(es[0])) + int(split_edges.count(es[1])) +
                int(split_edges.count(es[2]));
      if (cnt == 2) {
        for (const Edge& e : es)
          if (!split_edges.count(e)) {
            split_edges.insert(e);
            changed = true;
          }
      }
    }
  }

  std::map<Edge, int> midpoint;
  auto mid = [&](int a, int b) {
    auto key = edge_key(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    int idx = static_cast<int>(st.mesh.dirs.size());
    Vector3 dir = (st.mesh.dirs[a] + st.mesh.dirs[b]).normalized();
    st.mesh.dirs.push_back(dir);
    st.samples.push_back(sample_dir(dir));
    midpoint.emplace(key, idx);
    return idx;
  };

  std::vector<std::array<int, 3>> next;
  next.reserve(st.mesh.tris.size() * 2);
  for (const auto& t : st.mesh.tris) {
    bool se[3];
    int cnt = 0;
    for (int e = 0; e < 3; ++e) {
      se[e] = split_edges.count(edge_key(t[e], t[(e + 1) % 3])) > 0;
      if (se[e]) ++cnt;
    }
    if (cnt == 0) {
      next.push_back(t);
    } else if (cnt == 3) {
      int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    } else if (cnt == 1) {
      int e = se[0] ? 0 : se[1] ? 1 : 2;
      int a = t[e], b = t[(e + 1) % 3], c = t[(e + 2) % 3];
      int ab = mid(a, b);
      next.push_back({a, ab, c});
      next.push_back({ab, b, c});
    } else {
      fail(ErrorCode::Internal, "edge closure left a doubly hung triangle");
    }
  }
  st.mesh.tris = std::move(next);
}

DegreeResult adaptive_degree(const std::function<Vector3(const Vector3&)>& sample_dir,
                             const DegreeOptions& opts, bool axis_mode) {
  AdaptiveState st;
  st.axis_mode = axis_mode;
  st.mesh = icosphere(opts.base_level);
  st.samples.resize(st.mesh.dirs.size());
  for (std::size_t i = 0; i < st.mesh.dirs.size(); ++i)
    st.samples[i] = sample_dir(st.mesh.dirs[i]);

  // pre-refine caps around known needle directions down to focus_arc
  if (!opts.focus_dirs.empty() && opts.focus_arc > 0.0) {
    for (;;) {
      std::vector<char> marked(st.mesh.tris.size(), 0);
      bool any = false;
      for (std::size_t i = 0; i < st.mesh.tris.size(); ++i) {
        const auto& t = st.mesh.tris[i];
        double dmax = 0.0;
        for (int e = 0; e < 3; ++e)
          dmax = std::max(dmax, arc(st.mesh.dirs[t[e]], st.mesh.dirs[t[(e + 1) % 3]]));
        if (dmax <= opts.focus_arc) continue;
        for (const Vector3& f : opts.focus_dirs) {
          for (int e = 0; e < 3; ++e) {
            if (arc(st.mesh.dirs[t[e]], f.normalized()) < opts.focus_cap + dmax) {
              marked[i] = 1;
              any = true;
              break;
            }
          }
          if (marked[i]) break;
        }
      }
      if (!any) break;
      refine_marked(st, sample_dir, marked);
    }
  }

  const double max_arc = opts.image_arc_deg * kPi / 180.0;
  int rounds = 0;
  for (;;) {
    std::vector<char> marked(st.mesh.tris.size(), 0);
    bool any = false;
    for (std::size_t i = 0; i < st.mesh.tris.size(); ++i) {
      if (needs_refine(st, sample_dir, st.mesh.tris[i], max_arc, opts.min_domain_arc)) {
        marked[i] = 1;
        any = true;
      }
    }
    if (!any) break;
    if (rounds >= opts.max_rounds)
      fail(ErrorCode::DegreeUnresolved, "image still rough after the refinement budget");
    refine_marked(st, sample_dir, marked);
    ++rounds;
  }

  DegreeResult res;
  res.rounds = rounds;
  res.mesh = std::move(st.mesh);
  if (axis_mode) {
    LiftOptions lopts;
    lopts.guard_deg = opts.lift_guard_deg;
    res.values = lift_axes(st.samples, res.mesh.vertex_adjacency(), lopts);
  } else {
    res.values = std::move(st.samples);
  }
  res.degree =
      triangulation_degree(res.values, res.mesh.tris, opts.residual_tol, &res.residual);
  res.mod2 = ((res.degree % 2) + 2) % 2;
  return res;
}

}  // namespace

DegreeResult surface_degree(const StarSurface& s,
                            const std::function<Vector3(const Vector3&)>& director_at,
                            const DegreeOptions& opts) {
  auto sample_dir = [&](const Vector3& dir) {
    Vector3 q = director_at(s.point(dir));
    double n = q.norm();
    if (!(n > 0.5))
      fail(ErrorCode::InvalidUnitVector, "sampler returned a degenerate director");
    return Vector3(q / n);
  };
  return adaptive_degree(sample_dir, opts, false);
}

DegreeResult surface_degree_lifted(const StarSurface& s,
                                   const std::function<Matrix3(const Vector3&)>& rotation_at,
                                   const DegreeOptions& opts) {
  auto sample_dir = [&](const Vector3& dir) {
    return axis_of(rotation_at(s.point(dir)));
  };
  return adaptive_degree(sample_dir, opts, true);
}

std::pair<int, int> mod2_degree_at(const std::function<Matrix3(const Vector3&)>& rotation_at,
                                   const Vector3& a, double r, const DegreeOptions& opts) {
  DegreeResult res = surface_degree_lifted(star_sphere(a, r), rotation_at, opts);
  return {res.mod2, res.degree};
}

}  // namespace cosserat
