#include "cosserat/dipole.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>

#include "cosserat/errors.hpp"
#include "cosserat/surface.hpp"

namespace cosserat {

namespace {

// Chart component indices per face, chosen so e_u x e_v = outward.
// Face order: +x, -x, +y, -y, +z, -z.
constexpr int kFaceAxis[6] = {0, 0, 1, 1, 2, 2};
constexpr double kFaceSign[6] = {1, -1, 1, -1, 1, -1};
constexpr int kFaceU[6] = {1, 2, 2, 0, 0, 1};
constexpr int kFaceV[6] = {2, 1, 0, 2, 1, 0};

Vector3 unit_axis(int c) {
  Vector3 e = Vector3::Zero();
  e[c] = 1.0;
  return e;
}

// Face chart of a sampler's director: values in world coordinates, jacobian
// by central differences with the given step.
FaceField chart_field(const FieldSampler& s, const FaceFrame& fr, double fd_step) {
  auto at = [&s, fr](const Vector2& uv) {
    return Vector3(s.director(fr.origin + uv[0] * fr.e_u + uv[1] * fr.e_v));
  };
  FaceField f;
  f.value = at;
  f.jacobian = [at, fd_step](const Vector2& uv) {
    Matrix32 j;
    for (int c = 0; c < 2; ++c) {
      Vector2 d = Vector2::Zero();
      d[c] = fd_step;
      j.col(c) = (at(uv + d) - at(uv - d)) / (2.0 * fd_step);
    }
    return j;
  };
  return f;
}

// The same face plane seen through the chart of the cube on the other side:
// the two face coordinates swap.
FaceField swap_chart(const FaceField& f) {
  FaceField g;
  g.value = [f](const Vector2& uv) { return f.value(Vector2(uv[1], uv[0])); };
  g.jacobian = [f](const Vector2& uv) {
    Matrix32 j = f.jacobian(Vector2(uv[1], uv[0]));
    Matrix32 out;
    out.col(0) = j.col(1);
    out.col(1) = j.col(0);
    return out;
  };
  return g;
}

struct DiscNodes {
  std::vector<Vector2> uv;
  std::vector<double> w;
  std::vector<double> r;
};

// Polar quadrature of the disc of radius alpha around center, rings graded
// through the alpha^2 core so the wrap is resolved. Exact annular weights.
DiscNodes disc_nodes(const Vector2& center, double alpha, int n_core, int n_annulus,
                     int n_theta) {
  std::vector<double> radii, edges;
  bubble_ring_structure(alpha * alpha, 0.5 * alpha, alpha, n_core, n_annulus, radii,
                        edges);
  DiscNodes q;
  q.uv.reserve(radii.size() * n_theta);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    double ring_w = M_PI * (edges[i + 1] * edges[i + 1] - edges[i] * edges[i]) / n_theta;
    for (int k = 0; k < n_theta; ++k) {
      double th = (k + 0.5) * 2.0 * M_PI / n_theta;
      q.uv.push_back(center + radii[i] * Vector2(std::cos(th), std::sin(th)));
      q.w.push_back(ring_w);
      q.r.push_back(radii[i]);
    }
  }
  return q;
}

// Quadrature of the square [-half, half]^2 minus the centered disc of radius
// alpha: annular sectors out to the square edge. Sector boundaries align with
// the square's diagonals, so the edge-distance function is smooth inside each
// sector and five-point Gauss integration of the ring weights is exact to
// rounding.
void remainder_nodes(double half, double alpha, int n_rad, int n_theta,
                     std::vector<Vector2>& uv, std::vector<double>& w) {
  n_theta = std::max(8, ((n_theta + 7) / 8) * 8);
  static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double gw[5] = {0.2369268850561891, 0.4786286704993665,
                               0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
  auto edge_r = [half](double th) {
    return half / std::max(std::abs(std::cos(th)), std::abs(std::sin(th)));
  };
  for (int s = 0; s < n_theta; ++s) {
    double ta = -M_PI + 2.0 * M_PI * s / n_theta;
    double tb = -M_PI + 2.0 * M_PI * (s + 1) / n_theta;
    double tm = 0.5 * (ta + tb);
    for (int k = 0; k < n_rad; ++k) {
      double s0 = static_cast<double>(k) / n_rad;
      double s1 = static_cast<double>(k + 1) / n_rad;
      double weight = 0.0;
      for (int g = 0; g < 5; ++g) {
        double th = tm + 0.5 * (tb - ta) * gx[g];
        double ext = edge_r(th) - alpha;
        double r0 = alpha + s0 * ext;
        double r1 = alpha + s1 * ext;
        weight += gw[g] * 0.5 * (tb - ta) * 0.5 * (r1 * r1 - r0 * r0);
      }
      double rm = alpha + 0.5 * (s0 + s1) * (edge_r(tm) - alpha);
      uv.push_back(rm * Vector2(std::cos(tm), std::sin(tm)));
      w.push_back(weight);
    }
  }
}

// Surface integral of 2 |P(R^T Dphi_S - I)|^2 + lambda (8 |Dn_S|^2)^{p/2}
// over the disc of radius p.alpha in the given chart, with n read from the
// face field and phi from the sampler.
struct DiscEnergy {
  double defo2 = 0.0;
  double curv = 0.0;
  double total() const { return defo2 + curv; }
};

DiscEnergy disc_flip_energy(const FieldSampler& f, const FaceFrame& fr,
                            const FaceField& face, const BubbleParams& p, int n_core,
                            int n_annulus, int n_theta, double fd_step,
                            const MaterialConstants& mc) {
  DiscNodes q = disc_nodes(p.center, p.alpha, n_core, n_annulus, n_theta);
  DiscEnergy e;
  for (std::size_t i = 0; i < q.uv.size(); ++i) {
    const Vector2& uv = q.uv[i];
    Vector3 pos = fr.origin + uv[0] * fr.e_u + uv[1] * fr.e_v;
    Vector3 gpu = (f.deformation(pos + fd_step * fr.e_u) -
                   f.deformation(pos - fd_step * fr.e_u)) /
                  (2.0 * fd_step);
    Vector3 gpv = (f.deformation(pos + fd_step * fr.e_v) -
                   f.deformation(pos - fd_step * fr.e_v)) /
                  (2.0 * fd_step);
    Vector3 n = face.value(uv);
    Matrix3 R = cover(n);
    Matrix3 dphi = gpu * fr.e_u.transpose() + gpv * fr.e_v.transpose();
    Matrix3 A = R.transpose() * dphi - Matrix3::Identity();
    double defo = p_operator(A, mc).squaredNorm();
    Matrix32 j = face.jacobian(uv);
    Vector3 ju = j.col(0) - n * n.dot(j.col(0));
    Vector3 jv = j.col(1) - n * n.dot(j.col(1));
    double g = ju.squaredNorm() + jv.squaredNorm();
    double curv = mc.lambda * std::pow(8.0 * g, 0.5 * mc.p);
    e.defo2 += q.w[i] * 2.0 * defo;
    e.curv += q.w[i] * curv;
  }
  return e;
}

// World chart of face fid of cube j in the decomposition's frame.
FaceFrame world_chart(const CuboidDecomposition& K, int j, int fid) {
  FaceFrame l = K.cube_local(j).face(fid);
  FaceFrame w;
  w.origin = K.to_world(l.origin);
  w.e_u = K.frame * l.e_u;
  w.e_v = K.frame * l.e_v;
  w.outward = K.frame * l.outward;
  return w;
}

BubbleParams face_bubble(const FieldSampler& base, const CuboidDecomposition& K,
                         int k, double alpha) {
  FaceFrame fr = world_chart(K, k, 4);
  BubbleParams p;
  p.alpha = alpha;
  p.center = Vector2::Zero();
  p.orientation = align_rotation(base.director(fr.origin).normalized());
  return p;
}

}  // namespace

FaceFrame CubeGeometry::face(int id) const {
  if (id < 0 || id > 5) fail(ErrorCode::InvalidArgument, "face id out of range");
  FaceFrame f;
  f.outward = kFaceSign[id] * unit_axis(kFaceAxis[id]);
  f.e_u = unit_axis(kFaceU[id]);
  f.e_v = unit_axis(kFaceV[id]);
  f.origin = center + half * f.outward;
  return f;
}

int CubeGeometry::face_of(const Vector3& x) const {
  Vector3 rel = x - center;
  int axis = 0;
  for (int c = 1; c < 3; ++c)
    if (std::abs(rel[c]) > std::abs(rel[axis])) axis = c;
  return 2 * axis + (rel[axis] >= 0.0 ? 0 : 1);
}

Vector3 CubeGeometry::retract(const Vector3& x) const {
  Vector3 rel = x - center;
  double s = rel.lpNorm<Eigen::Infinity>();
  if (!(s > 0.0)) fail(ErrorCode::InvalidArgument, "cannot retract the cube center");
  return center + rel * (half / s);
}

Vector2 CubeGeometry::face_coords(int id, const Vector3& x) const {
  FaceFrame f = face(id);
  Vector3 rel = x - f.origin;
  return Vector2(rel.dot(f.e_u), rel.dot(f.e_v));
}

bool CuboidDecomposition::contains_local(const Vector3& y) const {
  return std::abs(y[0]) <= a && std::abs(y[1]) <= a && y[2] >= -a && y[2] <= d + a;
}

int CuboidDecomposition::cube_index(const Vector3& y) const {
  int j = static_cast<int>(std::floor((y[2] + a) / (2.0 * a)));
  return std::clamp(j, 0, m - 1);
}

CuboidDecomposition make_cuboid(const Vector3& P, const Vector3& N, int m) {
  if (m < 2) fail(ErrorCode::InvalidArgument, "dipole chain needs at least two cubes");
  CuboidDecomposition K;
  K.P = P;
  K.N = N;
  K.m = m;
  K.d = (N - P).norm();
  if (!(K.d > 0.0))
    fail(ErrorCode::InvalidArgument, "dipole endpoints must be distinct");
  K.a = K.d / (2.0 * (m - 1));
  Vector3 u = (N - P) / K.d;
  if (u[2] > 1.0 - 1e-12) {
    K.frame = Matrix3::Identity();
  } else if (u[2] < -1.0 + 1e-12) {
    K.frame = Eigen::DiagonalMatrix<double, 3>(1.0, -1.0, -1.0);
  } else {
    Vector3 axis = Vector3::UnitZ().cross(u).normalized();
    K.frame = Eigen::AngleAxisd(std::acos(std::clamp(u[2], -1.0, 1.0)), axis)
                  .toRotationMatrix();
  }
  return K;
}

DipoleSampler::DipoleSampler(const FieldSampler& base, const DipoleConstruction& con)
    : base_(&base), con_(&con) {
  const CuboidDecomposition& K = con.K;
  double fd = 1e-4 * K.a;
  for (int k = 0; k + 1 < K.m; ++k)
    faces_.push_back(
        insert_bubble(chart_field(base, world_chart(K, k, 4), fd), con.bubbles[k]));
}

Vector3 DipoleSampler::boundary_director_local(int j, const Vector3& y) const {
  const CuboidDecomposition& K = con_->K;
  CubeGeometry cube = K.cube_local(j);
  Vector3 rel = y - cube.center;
  int axis = 0;
  for (int c = 1; c < 3; ++c)
    if (std::abs(rel[c]) > std::abs(rel[axis])) axis = c;
  bool top = rel[axis] >= 0.0;
  if (axis == 2) {
    int k = top ? j : j - 1;
    if (k >= 0 && k + 1 < K.m) {
      // both sides of an internal face read the same chart, so the values
      // match across the cube interface by construction
      Vector2 uv(rel[0], rel[1]);
      return faces_[k].value(uv);
    }
  }
  return base_->director(K.to_world(y));
}

Vector3 DipoleSampler::director(const Vector3& x) const {
  const CuboidDecomposition& K = con_->K;
  Vector3 y = K.to_local(x);
  if (!K.contains_local(y)) return base_->director(x);
  int j = K.cube_index(y);
  Vector3 c = K.center_local(j);
  Vector3 rel = y - c;
  double s = rel.lpNorm<Eigen::Infinity>();
  if (s < 1e-14 * K.a) rel = Vector3(K.a, 0, 0);
  else rel *= K.a / s;
  return boundary_director_local(j, c + rel);
}

Vector3 DipoleSampler::deformation(const Vector3& x) const {
  const CuboidDecomposition& K = con_->K;
  Vector3 y = K.to_local(x);
  if (!K.contains_local(y)) return base_->deformation(x);
  int j = K.cube_index(y);
  Vector3 c = K.center_local(j);
  Vector3 rel = y - c;
  double s = rel.lpNorm<Eigen::Infinity>();
  if (s < 1e-14 * K.a) rel = Vector3(K.a, 0, 0);
  else rel *= K.a / s;
  return base_->deformation(K.to_world(c + rel));
}

double DipoleSampler::feature_scale(const Vector3& x) const {
  double b = base_->feature_scale(x);
  if (con_->K.contains_local(con_->K.to_local(x)))
    return std::min(b, con_->alpha * con_->alpha);
  return b;
}

CubeFlipResult cube_flip(const FieldSampler& f, const CubeGeometry& cube, int face_id,
                         double alpha, double eps_budget, const CubeFlipOptions& opts) {
  FaceFrame fr = cube.face(face_id);
  double room = cube.half - opts.center.lpNorm<Eigen::Infinity>();
  if (!(alpha > 0.0) || alpha >= room)
    fail(ErrorCode::AlphaTooLarge, "flip disc of radius " + std::to_string(alpha) +
                                       " does not fit on the face");
  CubeFlipResult res;
  res.params.alpha = alpha;
  res.params.center = opts.center;
  Vector3 disc_center =
      fr.origin + opts.center[0] * fr.e_u + opts.center[1] * fr.e_v;
  res.params.orientation = align_rotation(f.director(disc_center).normalized());

  double fd = opts.fd_step_rel * cube.half;
  res.flipped = insert_bubble(chart_field(f, fr, fd), res.params);
  DiscEnergy de = disc_flip_energy(f, fr, res.flipped, res.params, opts.n_core,
                                   opts.n_annulus, opts.n_theta, fd, opts.constants);
  res.disc_deformation = de.defo2;
  res.disc_curvature = de.curv;
  res.disc_total = de.total();
  if (!(res.disc_total < 64.0 * M_PI + eps_budget))
    fail(ErrorCode::AlphaTooLarge,
         "flip disc integral " + std::to_string(res.disc_total) +
             " exceeds the budget " + std::to_string(64.0 * M_PI + eps_budget));

  if (opts.check_degrees) {
    StarSurface box = star_box(cube.center - Vector3::Constant(cube.half),
                               cube.center + Vector3::Constant(cube.half));
    auto before = [&f](const Vector3& x) { return cover(f.director(x)); };
    res.mod2_before = surface_degree_lifted(box, before, opts.degree).mod2;

    DegreeOptions dopts = opts.degree;
    if (dopts.focus_dirs.empty()) {
      dopts.focus_dirs = {(disc_center - cube.center).normalized()};
      dopts.focus_arc =
          std::clamp(4.0 * std::atan2(alpha * alpha, cube.half), 1e-4, 0.05);
      dopts.focus_cap = std::clamp(32.0 * std::atan2(alpha * alpha, cube.half),
                                   8.0 * dopts.focus_arc, 0.5);
    }
    auto after = [&](const Vector3& x) {
      if (cube.face_of(x) == face_id) {
        Vector2 uv = cube.face_coords(face_id, x);
        if ((uv - opts.center).norm() < alpha) return cover(res.flipped.value(uv));
      }
      return cover(f.director(x));
    };
    res.mod2_after = surface_degree_lifted(box, after, dopts).mod2;
  }
  return res;
}

double find_flip_threshold(const FieldSampler& f, const CubeGeometry& cube,
                           int face_id, double eps_budget, const CubeFlipOptions& opts,
                           int iters) {
  FaceFrame fr = cube.face(face_id);
  double room = cube.half - opts.center.lpNorm<Eigen::Infinity>();
  if (!(room > 0.0))
    fail(ErrorCode::InvalidArgument, "disc center outside the face");
  Vector3 disc_center =
      fr.origin + opts.center[0] * fr.e_u + opts.center[1] * fr.e_v;
  Matrix3 orient = align_rotation(f.director(disc_center).normalized());
  double fd = opts.fd_step_rel * cube.half;

  auto ok = [&](double alpha) {
    BubbleParams p;
    p.alpha = alpha;
    p.center = opts.center;
    p.orientation = orient;
    FaceField face = insert_bubble(chart_field(f, fr, fd), p);
    DiscEnergy de = disc_flip_energy(f, fr, face, p, opts.n_core, opts.n_annulus,
                                     opts.n_theta, fd, opts.constants);
    return de.total() < 64.0 * M_PI + eps_budget;
  };

  double lo = 1e-3 * room;
  if (!ok(lo))
    fail(ErrorCode::AlphaTooLarge, "no admissible flip radius on this face");
  double hi = room * (1.0 - 1e-9);
  if (ok(hi)) return hi;  // budget never binds; the face geometry is the cap
  for (int it = 0; it < iters; ++it) {
    double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

DipoleConstruction make_dipole_construction(const FieldSampler& base, const Vector3& P,
                                            const Vector3& N, int m, double alpha,
                                            const DipoleOptions& opts) {
  DipoleConstruction con;
  con.K = make_cuboid(P, N, m);
  if (!(alpha > 0.0) || alpha >= 0.5 * con.K.a)
    fail(ErrorCode::AlphaTooLarge,
         "alpha " + std::to_string(alpha) + " must stay below half the cube half-width " +
             std::to_string(con.K.a));
  con.alpha = alpha;
  double fd = opts.fd_step_rel * con.K.a;
  MaterialConstants mc;
  for (int k = 0; k + 1 < m; ++k) {
    BubbleParams p = face_bubble(base, con.K, k, alpha);
    FaceFrame fr = world_chart(con.K, k, 4);
    FaceField face = insert_bubble(chart_field(base, fr, fd), p);
    DiscEnergy de = disc_flip_energy(base, fr, face, p, opts.n_core, opts.n_annulus,
                                     opts.n_theta, fd, mc);
    if (!(de.total() < 64.0 * M_PI + opts.eps_budget))
      fail(ErrorCode::AlphaTooLarge,
           "flip disc integral " + std::to_string(de.total()) + " on internal face " +
               std::to_string(k) + " exceeds the budget");
    con.bubbles.push_back(p);
    con.disc_budgets.push_back(de.total());
  }
  return con;
}

InsertDipoleResult insert_dipole(const CosseratField& f, const Vector3& P,
                                 const Vector3& N, int m, double alpha,
                                 const DipoleOptions& opts) {
  CuboidDecomposition probe = make_cuboid(P, N, m);
  double need = probe.a + alpha;
  int samples = 8 * m;
  for (int s = 0; s <= samples; ++s) {
    Vector3 x = P + (N - P) * (static_cast<double>(s) / samples);
    double dist = boundary_distance(f.domain, x);
    if (dist < need)
      fail(ErrorCode::SegmentTooClose,
           "segment clearance " + std::to_string(dist) + " below required " +
               std::to_string(need));
  }

  FieldInterpolator base(f);
  InsertDipoleResult out;
  out.construction = make_dipole_construction(base, P, N, m, alpha, opts);
  DipoleSampler samp(base, out.construction);
  out.field = make_field(f.domain, samp);
  // nodes outside the chain keep their original bits
  const GridDomain& d = f.domain;
  for (int i = 0; i < d.nx; ++i)
    for (int j = 0; j < d.ny; ++j)
      for (int k = 0; k < d.nz; ++k) {
        std::size_t idx = d.index(i, j, k);
        if (!out.construction.K.contains_local(
                out.construction.K.to_local(d.position(i, j, k)))) {
          out.field.phi[idx] = f.phi[idx];
          out.field.n[idx] = f.n[idx];
        }
      }
  out.field.dirichlet = f.dirichlet;
  return out;
}

DipoleAudit audit_dipole_energy(const DipoleConstruction& con, const FieldSampler& base,
                                const DipoleAuditOptions& opts) {
  const MaterialConstants& mc = opts.constants;
  mc.validate();
  if (mc.p >= 3.0)
    fail(ErrorCode::InvalidArgument,
         "cone pullback energy diverges for curvature exponent p >= 3");
  const CuboidDecomposition& K = con.K;
  const double a = K.a;
  const double fd = opts.fd_step_rel * a;
  const Matrix3 pid = p_operator(Matrix3::Identity(), mc);
  const double c2 = pid.squaredNorm();
  const double pow_exp = 3.0 - mc.p;

  DipoleAudit audit;
  audit.per_cube.assign(K.m, RegionEnergies{});

  // director charts per internal face, reused by both adjacent cubes
  std::vector<FaceField> faces;
  for (int k = 0; k + 1 < K.m; ++k)
    faces.push_back(
        insert_bubble(chart_field(base, world_chart(K, k, 4), fd), con.bubbles[k]));

  for (int j = 0; j < K.m; ++j) {
    Vector3 cw = K.center_world(j);
    for (int fid = 0; fid < 6; ++fid) {
      FaceFrame fr = world_chart(K, j, fid);
      bool axial = fid >= 4;
      bool has_bubble = (fid == 4 && j + 1 < K.m) || (fid == 5 && j > 0);
      FaceField nf;
      if (fid == 4 && j + 1 < K.m) nf = faces[j];
      else if (fid == 5 && j > 0) nf = swap_chart(faces[j - 1]);
      else nf = chart_field(base, fr, fd);

      // quadrature nodes with a disc/remainder split on axial faces so the
      // standard region partition is tiled exactly
      std::vector<Vector2> uv;
      std::vector<double> w;
      std::vector<double> r;
      if (axial) {
        DiscNodes q = disc_nodes(Vector2::Zero(), con.alpha, opts.n_core,
                                 opts.n_annulus, opts.n_theta);
        uv = std::move(q.uv);
        w = std::move(q.w);
        r = std::move(q.r);
        remainder_nodes(a, con.alpha, opts.n_remainder, opts.n_theta, uv, w);
        r.resize(uv.size(), 2.0 * con.alpha);
      } else {
        int n = opts.n_rect;
        double cell = 2.0 * a / n;
        for (int iu = 0; iu < n; ++iu)
          for (int iv = 0; iv < n; ++iv) {
            uv.push_back(Vector2(-a + (iu + 0.5) * cell, -a + (iv + 0.5) * cell));
            w.push_back(cell * cell);
            r.push_back(2.0 * con.alpha);
          }
      }

      for (std::size_t q = 0; q < uv.size(); ++q) {
        const Vector2& p2 = uv[q];
        Vector3 pos = fr.origin + p2[0] * fr.e_u + p2[1] * fr.e_v;
        Vector3 gpu = (base.deformation(pos + fd * fr.e_u) -
                       base.deformation(pos - fd * fr.e_u)) /
                      (2.0 * fd);
        Vector3 gpv = (base.deformation(pos + fd * fr.e_v) -
                       base.deformation(pos - fd * fr.e_v)) /
                      (2.0 * fd);
        Vector3 n = nf.value(p2);
        Matrix3 R = cover(n);
        Matrix32 jn = nf.jacobian(p2);
        Vector3 gnu = jn.col(0) - n * n.dot(jn.col(0));
        Vector3 gnv = jn.col(1) - n * n.dot(jn.col(1));

        Vector3 eu_t = fr.e_u - (p2[0] / a) * fr.outward;
        Vector3 ev_t = fr.e_v - (p2[1] / a) * fr.outward;
        Matrix3 mphi = gpu * eu_t.transpose() + gpv * ev_t.transpose();
        Matrix3 a0 = p_operator(R.transpose() * mphi, mc);
        double c0 = a0.squaredNorm();
        double c1 = -2.0 * (a0.array() * pid.array()).sum();
        double gram = gnu.squaredNorm() * eu_t.squaredNorm() +
                      2.0 * gnu.dot(gnv) * eu_t.dot(ev_t) +
                      gnv.squaredNorm() * ev_t.squaredNorm();
        double curv_coef = mc.lambda * std::pow(8.0 * gram, 0.5 * mc.p);

        // ray through this node: t in (0, 1], volume element a t^2 dt du dv;
        // the density is c_defo(t) / t^2 + curv / t^p, so every piece has a
        // closed-form antiderivative
        Vector3 ray = pos - cw;
        double t_ball = std::min(1.0, a / ray.norm());

        double seg[2][2] = {{0.0, t_ball}, {t_ball, 1.0}};
        for (int part = 0; part < 2; ++part) {
          double t0 = seg[part][0], t1 = seg[part][1];
          if (opts.clip) {
            // clip the ray to the audit ball |cw + t ray - clip_center| <= R
            Vector3 w0 = cw - opts.clip_center;
            double qa = ray.squaredNorm();
            double qb = 2.0 * w0.dot(ray);
            double qc = w0.squaredNorm() - opts.clip_radius * opts.clip_radius;
            double disc = qb * qb - 4.0 * qa * qc;
            if (disc <= 0.0) continue;
            double sq = std::sqrt(disc);
            t0 = std::max(t0, (-qb - sq) / (2.0 * qa));
            t1 = std::min(t1, (-qb + sq) / (2.0 * qa));
          }
          if (!(t1 > t0)) continue;
          double defo =
              w[q] * a *
              (c0 * (t1 - t0) + 0.5 * c1 * (t1 * t1 - t0 * t0) +
               c2 * (t1 * t1 * t1 - t0 * t0 * t0) / 3.0);
          double curv = w[q] * a * curv_coef *
                        (std::pow(t1, pow_exp) - std::pow(t0, pow_exp)) / pow_exp;
          audit.deformation += defo;
          audit.curvature += curv;
          double both = defo + curv;
          RegionEnergies& reg = audit.per_cube[j];
          if (part == 0) reg.ball += both;
          else if (!axial || r[q] > con.alpha) reg.rest += both;
          else if (fid == 4)
            (r[q] <= 0.5 * con.alpha ? reg.top_disc : reg.top_annulus) += both;
          else
            (r[q] <= 0.5 * con.alpha ? reg.bottom_disc : reg.bottom_annulus) += both;
        }
      }
    }
  }
  audit.total = audit.deformation + audit.curvature;
  return audit;
}

DipoleDegreeLedger dipole_degree_ledger(const DipoleConstruction& con,
                                        const FieldSampler& base,
                                        double probe_radius_rel,
                                        const DegreeOptions& opts) {
  if (!(probe_radius_rel > 0.0) || probe_radius_rel >= 1.0)
    fail(ErrorCode::InvalidArgument, "probe radius must sit inside the cube");
  DipoleSampler samp(base, con);
  const CuboidDecomposition& K = con.K;
  DegreeOptions dopts = opts;
  if (dopts.focus_dirs.empty()) {
    // the wrap cones leave each center along the chain axis
    dopts.focus_dirs = {K.frame * Vector3::UnitZ(), -(K.frame * Vector3::UnitZ())};
    dopts.focus_arc =
        std::clamp(4.0 * std::atan2(con.alpha * con.alpha, K.a), 1e-4, 0.05);
    dopts.focus_cap = std::clamp(32.0 * std::atan2(con.alpha * con.alpha, K.a),
                                 8.0 * dopts.focus_arc, 0.5);
  }
  DipoleDegreeLedger led;
  auto dir_at = [&samp](const Vector3& x) { return samp.director(x); };
  for (int j = 0; j < K.m; ++j) {
    StarSurface s = star_sphere(K.center_world(j), probe_radius_rel * K.a);
    DegreeResult res = surface_degree(s, dir_at, dopts);
    led.lift.push_back(res.degree);
    led.mod2.push_back(res.mod2);
  }
  return led;
}

}  // namespace cosserat
