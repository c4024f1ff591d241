#include "cosserat/energy.hpp"

#include <cmath>

#include "cosserat/parallel.hpp"

namespace cosserat {

namespace {

// Density evaluation with pre-validated constants and pre-square-rooted
// weights; the hot loops cannot afford a MaterialConstants::validate() and a
// p_operator() temporary per node.
struct DensityKernel {
  double s1, sc, s2;  // sqrt(mu1), sqrt(muc), sqrt(mu2)
  double lambda, p;
  bool unit_weights;

  explicit DensityKernel(const MaterialConstants& c) {
    c.validate();
    s1 = std::sqrt(c.mu1);
    sc = std::sqrt(c.muc);
    s2 = std::sqrt(c.mu2);
    lambda = c.lambda;
    p = c.p;
    unit_weights = (c.mu1 == 1.0 && c.muc == 1.0 && c.mu2 == 1.0);
  }

  double deformation(const Matrix3& A) const {
    if (unit_weights) return A.squaredNorm();
    Matrix3 sym = 0.5 * (A + A.transpose());
    double tr = A.trace();
    Matrix3 dev = sym - (tr / 3.0) * Matrix3::Identity();
    Matrix3 skew = 0.5 * (A - A.transpose());
    Matrix3 P = s1 * dev + sc * skew + (s2 / 3.0) * tr * Matrix3::Identity();
    return P.squaredNorm();
  }

  // |DR|^2 from the projected director derivatives via the homothety
  // |d cover(n) v|^2 = 8 |v|^2 and its polarization.
  double curvature_from_dn(const Matrix3& Dn_tan) const {
    double s = 8.0 * Dn_tan.squaredNorm();
    return (p == 2.0) ? lambda * s : lambda * std::pow(s, 0.5 * p);
  }
};

}  // namespace

EnergyReport energy(const CosseratField& f, const MaterialConstants& c, int threads) {
  const GridDomain& d = f.domain;
  const DensityKernel kern(c);
  const double inv2h = 0.5 / d.h;
  const double w = d.h * d.h * d.h;

  const std::size_t total = d.size();
  const int n_chunks = 64;
  std::vector<double> defo(n_chunks, 0.0), curv(n_chunks, 0.0);
  std::vector<std::size_t> cnt(n_chunks, 0);

  const std::size_t stride_i = static_cast<std::size_t>(d.ny) * d.nz;
  const std::size_t stride_j = static_cast<std::size_t>(d.nz);

  parallel_chunks(total, threads, n_chunks, [&](std::size_t b, std::size_t e, int chunk) {
    double sd = 0.0, sc2 = 0.0;
    std::size_t n_nodes = 0;
    for (std::size_t idx = b; idx < e; ++idx) {
      if (static_cast<NodeClass>(d.node_class[idx]) != NodeClass::Interior) continue;
      const Vector3& n0 = f.n[idx];
      Matrix3 Dphi, Dn;
      const std::size_t strides[3] = {stride_i, stride_j, 1};
      for (int a = 0; a < 3; ++a) {
        const std::size_t sp = idx + strides[a], sm = idx - strides[a];
        Dphi.col(a) = (f.phi[sp] - f.phi[sm]) * inv2h;
        Dn.col(a) = (f.n[sp] - f.n[sm]) * inv2h;
      }
      // Project director derivatives onto the tangent space at n0.
      Dn -= n0 * (n0.transpose() * Dn);
      Matrix3 R = 2.0 * (n0 * n0.transpose()) - Matrix3::Identity();
      Matrix3 A = R.transpose() * Dphi - Matrix3::Identity();
      sd += kern.deformation(A);
      sc2 += kern.curvature_from_dn(Dn);
      ++n_nodes;
    }
    defo[chunk] = sd;
    curv[chunk] = sc2;
    cnt[chunk] = n_nodes;
  });

  EnergyReport rep;
  for (int chunk = 0; chunk < n_chunks; ++chunk) {
    rep.deformation += defo[chunk] * w;
    rep.curvature += curv[chunk] * w;
    rep.nodes += cnt[chunk];
  }
  rep.total = rep.deformation + rep.curvature;
  return rep;
}

NodeGradient node_gradient(const CosseratField& f, int i, int j, int k) {
  const GridDomain& d = f.domain;
  if (i < 0 || i >= d.nx || j < 0 || j >= d.ny || k < 0 || k >= d.nz)
    fail(ErrorCode::OutsideDomain, "node index outside the lattice");
  if (!d.in_shape(i, j, k))
    fail(ErrorCode::OutsideDomain, "gradient requested at an outside node");

  NodeGradient g;
  const std::size_t idx = d.index(i, j, k);
  const int coord[3] = {i, j, k};
  const int dims[3] = {d.nx, d.ny, d.nz};
  const std::size_t strides[3] = {static_cast<std::size_t>(d.ny) * d.nz,
                                  static_cast<std::size_t>(d.nz), 1};
  for (int a = 0; a < 3; ++a) {
    bool has_m = coord[a] > 0, has_p = coord[a] + 1 < dims[a];
    if (has_m) {
      int c[3] = {i, j, k};
      --c[a];
      has_m = d.in_shape(c[0], c[1], c[2]);
    }
    if (has_p) {
      int c[3] = {i, j, k};
      ++c[a];
      has_p = d.in_shape(c[0], c[1], c[2]);
    }
    std::size_t sp = idx + strides[a], sm = idx - strides[a];
    if (has_m && has_p) {
      g.Dphi.col(a) = (f.phi[sp] - f.phi[sm]) * (0.5 / d.h);
      g.Dn_tan.col(a) = (f.n[sp] - f.n[sm]) * (0.5 / d.h);
    } else if (has_p) {
      g.Dphi.col(a) = (f.phi[sp] - f.phi[idx]) / d.h;
      g.Dn_tan.col(a) = (f.n[sp] - f.n[idx]) / d.h;
    } else if (has_m) {
      g.Dphi.col(a) = (f.phi[idx] - f.phi[sm]) / d.h;
      g.Dn_tan.col(a) = (f.n[idx] - f.n[sm]) / d.h;
    } else {
      fail(ErrorCode::ResolutionTooCoarse, "no axis neighbor for a difference stencil");
    }
  }
  const Vector3& n0 = f.n[idx];
  g.Dn_tan -= n0 * (n0.transpose() * g.Dn_tan);
  return g;
}

DiscMetrics disc_metrics(const CosseratField& f, double z_level) {
  const GridDomain& d = f.domain;
  if (d.shape != ShapeTag::Ball)
    fail(ErrorCode::InvalidArgument, "disc metrics need a ball domain");
  const double dz = z_level - d.center[2];
  if (std::abs(dz) >= d.radius)
    fail(ErrorCode::OutsideDomain, "disc plane misses the ball");

  DiscMetrics m;
  m.disc_radius = std::sqrt(d.radius * d.radius - dz * dz);
  const double h = d.h;
  const FieldInterpolator interp(f);
  const int half = static_cast<int>(std::floor(m.disc_radius / h));

  // 2D grid over the disc; directors come from the volume interpolation and
  // in-plane derivatives from central differences on this grid (one-sided at
  // the rim).
  auto at = [&](int i, int j) -> Vector3 {
    return interp.director(Vector3(d.center[0] + i * h, d.center[1] + j * h, z_level));
  };
  const double r2 = m.disc_radius * m.disc_radius;
  auto in_disc = [&](int i, int j) {
    return (static_cast<double>(i) * i + static_cast<double>(j) * j) * h * h <= r2;
  };

  for (int i = -half; i <= half; ++i)
    for (int j = -half; j <= half; ++j) {
      if (!in_disc(i, j)) continue;
      Vector3 n0 = at(i, j);
      Vector3 du, dv;
      bool ok_u = true, ok_v = true;
      if (in_disc(i - 1, j) && in_disc(i + 1, j))
        du = (at(i + 1, j) - at(i - 1, j)) * (0.5 / h);
      else if (in_disc(i + 1, j))
        du = (at(i + 1, j) - n0) / h;
      else if (in_disc(i - 1, j))
        du = (n0 - at(i - 1, j)) / h;
      else
        ok_u = false;
      if (in_disc(i, j - 1) && in_disc(i, j + 1))
        dv = (at(i, j + 1) - at(i, j - 1)) * (0.5 / h);
      else if (in_disc(i, j + 1))
        dv = (at(i, j + 1) - n0) / h;
      else if (in_disc(i, j - 1))
        dv = (n0 - at(i, j - 1)) / h;
      else
        ok_v = false;
      if (!ok_u || !ok_v) continue;
      du -= n0.dot(du) * n0;
      dv -= n0.dot(dv) * n0;
      m.dirichlet_full += 8.0 * (du.squaredNorm() + dv.squaredNorm()) * h * h;
      m.jacobian_area += du.cross(dv).norm() * h * h;
      ++m.nodes;
    }
  return m;
}

double disc_energy(const CosseratField& f, double z_level) {
  return disc_metrics(f, z_level).dirichlet_full;
}

}  // namespace cosserat
