#include "cosserat/surface.hpp"

#include <cmath>

namespace cosserat {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double SurfacePatch::area() const {
  double a = 0.0;
  for (double w : weight) a += w;
  return a;
}

SurfacePatch make_sphere_patch(const Vector3& center, double radius, int n_polar,
                               int n_azimuth) {
  if (n_polar < 2 || n_azimuth < 3)
    fail(ErrorCode::InvalidArgument, "sphere patch needs at least 2x3 cells");
  SurfacePatch p;
  p.nu = n_azimuth;
  p.nv = n_polar;
  p.periodic_u = true;
  p.period_u = 2.0 * kPi;
  const double dphi = 2.0 * kPi / n_azimuth;
  const double dth = kPi / n_polar;
  p.pu.resize(n_azimuth);
  p.pv.resize(n_polar);
  for (int i = 0; i < n_azimuth; ++i) p.pu[i] = (i + 0.5) * dphi;
  for (int j = 0; j < n_polar; ++j) p.pv[j] = (j + 0.5) * dth;
  p.pos.resize(p.idx(n_azimuth - 1, n_polar - 1) + 1);
  p.weight.resize(p.pos.size());
  for (int i = 0; i < n_azimuth; ++i)
    for (int j = 0; j < n_polar; ++j) {
      const double phi = p.pu[i], th = p.pv[j];
      p.pos[p.idx(i, j)] =
          center + radius * Vector3(std::sin(th) * std::cos(phi),
                                    std::sin(th) * std::sin(phi), std::cos(th));
      p.weight[p.idx(i, j)] =
          radius * radius * dphi * (std::cos(th - 0.5 * dth) - std::cos(th + 0.5 * dth));
    }
  return p;
}

SurfacePatch make_polar_patch(const Vector3& origin, const Vector3& e_u,
                              const Vector3& e_v, const std::vector<double>& ring_radii,
                              const std::vector<double>& ring_edges, int n_theta) {
  if (ring_edges.size() != ring_radii.size() + 1 || ring_radii.empty())
    fail(ErrorCode::InvalidArgument, "ring radii/edges mismatch");
  if (n_theta < 3) fail(ErrorCode::InvalidArgument, "polar patch needs >= 3 sectors");
  SurfacePatch p;
  p.nu = n_theta;
  p.nv = static_cast<int>(ring_radii.size());
  p.periodic_u = true;
  p.period_u = 2.0 * kPi;
  const double dth = 2.0 * kPi / n_theta;
  p.pu.resize(n_theta);
  for (int i = 0; i < n_theta; ++i) p.pu[i] = (i + 0.5) * dth;
  p.pv = ring_radii;
  p.pos.resize(static_cast<std::size_t>(n_theta) * p.nv);
  p.weight.resize(p.pos.size());
  for (int j = 0; j < p.nv; ++j) {
    const double r = ring_radii[j];
    const double a0 = ring_edges[j], a1 = ring_edges[j + 1];
    if (!(a1 > a0) || r < a0 || r > a1)
      fail(ErrorCode::InvalidArgument, "ring radii must sit inside their edges");
    const double cell = 0.5 * (a1 * a1 - a0 * a0) * dth;
    for (int i = 0; i < n_theta; ++i) {
      const double th = p.pu[i];
      p.pos[p.idx(i, j)] = origin + r * (std::cos(th) * e_u + std::sin(th) * e_v);
      p.weight[p.idx(i, j)] = cell;
    }
  }
  return p;
}

SurfacePatch make_rect_patch(const Vector3& origin, const Vector3& e_u,
                             const Vector3& e_v, double half_u, double half_v, int nu,
                             int nv) {
  if (nu < 2 || nv < 2) fail(ErrorCode::InvalidArgument, "rect patch needs >= 2x2 cells");
  SurfacePatch p;
  p.nu = nu;
  p.nv = nv;
  p.periodic_u = false;
  const double du = 2.0 * half_u / nu, dv = 2.0 * half_v / nv;
  p.pu.resize(nu);
  p.pv.resize(nv);
  for (int i = 0; i < nu; ++i) p.pu[i] = -half_u + (i + 0.5) * du;
  for (int j = 0; j < nv; ++j) p.pv[j] = -half_v + (j + 0.5) * dv;
  p.pos.resize(static_cast<std::size_t>(nu) * nv);
  p.weight.assign(p.pos.size(), du * dv);
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j)
      p.pos[p.idx(i, j)] = origin + p.pu[i] * e_u + p.pv[j] * e_v;
  return p;
}

PatchValues sample_patch(const SurfacePatch& p, const FieldSampler& s) {
  PatchValues v;
  v.phi.resize(p.pos.size());
  v.n.resize(p.pos.size());
  for (std::size_t i = 0; i < p.pos.size(); ++i) {
    v.phi[i] = s.deformation(p.pos[i]);
    Vector3 q = s.director(p.pos[i]);
    double norm = q.norm();
    if (!(norm > 0.5))
      fail(ErrorCode::InvalidUnitVector, "sampler returned a degenerate director");
    v.n[i] = q / norm;
  }
  return v;
}

namespace {

// Derivative along one parameter direction with a 3-point nonuniform stencil
// (periodic wrap in u when enabled, one-sided at open ends).
template <class Get>
Vector3 param_derivative(const Get& value, int i, int count, bool periodic,
                         const std::vector<double>& coords, double period) {
  auto coord = [&](int k) {
    if (!periodic) return coords[k];
    if (k < 0) return coords[k + count] - period;
    if (k >= count) return coords[k - count] + period;
    return coords[k];
  };
  auto val = [&](int k) {
    if (periodic) k = (k % count + count) % count;
    return value(k);
  };
  if (!periodic && i == 0) {
    double dh = coords[1] - coords[0];
    return (val(1) - val(0)) / dh;
  }
  if (!periodic && i == count - 1) {
    double dh = coords[count - 1] - coords[count - 2];
    return (val(count - 1) - val(count - 2)) / dh;
  }
  const double hm = coord(i) - coord(i - 1);
  const double hp = coord(i + 1) - coord(i);
  const Vector3 fm = val(i - 1), f0 = val(i), fp = val(i + 1);
  // Second-order accurate on nonuniform spacing.
  return (hm * hm * fp - hp * hp * fm + (hp * hp - hm * hm) * f0) /
         (hm * hp * (hm + hp));
}

struct SurfaceGradient {
  Matrix3 Dphi;    // tangential, embedded 3x3
  Matrix3 Dn;      // tangential projected director gradient, embedded 3x3
  Vector3 n;
};

SurfaceGradient surface_gradient(const SurfacePatch& p, const PatchValues& v, int iu,
                                 int iv) {
  auto pos_u = [&](int k) { return p.pos[p.idx(k, iv)]; };
  auto pos_v = [&](int k) { return p.pos[p.idx(iu, k)]; };
  auto phi_u = [&](int k) { return v.phi[p.idx(k, iv)]; };
  auto phi_v = [&](int k) { return v.phi[p.idx(iu, k)]; };
  auto n_u = [&](int k) { return v.n[p.idx(k, iv)]; };
  auto n_v = [&](int k) { return v.n[p.idx(iu, k)]; };

  Vector3 Xu = param_derivative(pos_u, iu, p.nu, p.periodic_u, p.pu, p.period_u);
  Vector3 Xv = param_derivative(pos_v, iv, p.nv, false, p.pv, 0.0);
  Vector3 fu = param_derivative(phi_u, iu, p.nu, p.periodic_u, p.pu, p.period_u);
  Vector3 fv = param_derivative(phi_v, iv, p.nv, false, p.pv, 0.0);
  Vector3 qu = param_derivative(n_u, iu, p.nu, p.periodic_u, p.pu, p.period_u);
  Vector3 qv = param_derivative(n_v, iv, p.nv, false, p.pv, 0.0);

  const double E = Xu.dot(Xu), F = Xu.dot(Xv), G = Xv.dot(Xv);
  const double det = E * G - F * F;
  const double scale = 0.5 * (E + G);
  if (!(det > 1e-14 * scale * scale))
    fail(ErrorCode::DegeneratePatch, "vanishing first fundamental form");
  const Vector3 gu = (G * Xu - F * Xv) / det;
  const Vector3 gv = (E * Xv - F * Xu) / det;

  SurfaceGradient g;
  g.n = v.n[p.idx(iu, iv)];
  g.Dphi = fu * gu.transpose() + fv * gv.transpose();
  Vector3 tu = qu - g.n.dot(qu) * g.n;
  Vector3 tv = qv - g.n.dot(qv) * g.n;
  g.Dn = tu * gu.transpose() + tv * gv.transpose();
  return g;
}

std::pair<double, double> density_at(const SurfacePatch& p, const PatchValues& v,
                                     const MaterialConstants& c, int iu, int iv) {
  SurfaceGradient g = surface_gradient(p, v, iu, iv);
  Matrix3 R = 2.0 * (g.n * g.n.transpose()) - Matrix3::Identity();
  Matrix3 A = R.transpose() * g.Dphi - Matrix3::Identity();
  double defo = (c.mu1 == 1.0 && c.muc == 1.0 && c.mu2 == 1.0)
                    ? A.squaredNorm()
                    : p_operator(A, c).squaredNorm();
  double s = 8.0 * g.Dn.squaredNorm();
  double curv = (c.p == 2.0) ? c.lambda * s : c.lambda * std::pow(s, 0.5 * c.p);
  return {defo, curv};
}

}  // namespace

EnergyReport surface_energy(const SurfacePatch& p, const PatchValues& v,
                            const MaterialConstants& c, double deformation_factor) {
  c.validate();
  if (v.phi.size() != p.pos.size() || v.n.size() != p.pos.size())
    fail(ErrorCode::InvalidArgument, "patch values do not match the patch");
  EnergyReport rep;
  for (int iu = 0; iu < p.nu; ++iu)
    for (int iv = 0; iv < p.nv; ++iv) {
      auto [defo, curv] = density_at(p, v, c, iu, iv);
      const double w = p.weight[p.idx(iu, iv)];
      rep.deformation += deformation_factor * defo * w;
      rep.curvature += curv * w;
      ++rep.nodes;
    }
  rep.total = rep.deformation + rep.curvature;
  return rep;
}

std::vector<std::pair<double, double>> surface_density(const SurfacePatch& p,
                                                       const PatchValues& v,
                                                       const MaterialConstants& c) {
  c.validate();
  std::vector<std::pair<double, double>> out(p.pos.size());
  for (int iu = 0; iu < p.nu; ++iu)
    for (int iv = 0; iv < p.nv; ++iv) out[p.idx(iu, iv)] = density_at(p, v, c, iu, iv);
  return out;
}

void bubble_ring_structure(double beta, double r_mid, double r_out, int n_core,
                           int n_outer, std::vector<double>& radii,
                           std::vector<double>& edges) {
  if (!(beta > 0.0) || !(r_mid > 0.0) || !(r_out > r_mid) || n_core < 4 || n_outer < 2)
    fail(ErrorCode::InvalidArgument, "bad bubble ring parameters");
  radii.clear();
  edges.clear();
  // Core band [0, r_mid]: r(s) = beta tan(s psi / 2) with psi the image polar
  // angle at r_mid, so each ring advances the bubble image by the same arc.
  const double psi = 2.0 * std::atan(r_mid / beta);
  edges.push_back(0.0);
  for (int k = 1; k <= n_core; ++k) {
    double s = static_cast<double>(k) / n_core;
    edges.push_back(beta * std::tan(0.5 * s * psi));
  }
  // Outer band (r_mid, r_out]: uniform rings.
  for (int k = 1; k <= n_outer; ++k)
    edges.push_back(r_mid + (r_out - r_mid) * k / n_outer);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k)
    radii.push_back(0.5 * (edges[k] + edges[k + 1]));
}

}  // namespace cosserat
