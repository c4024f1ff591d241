#include <doctest.h>

#include <cmath>

#include "cosserat/energy.hpp"
#include "cosserat/surface.hpp"

using namespace cosserat;

namespace {
constexpr double kPi = 3.14159265358979323846;

struct Hedgehog final : FieldSampler {
  Vector3 deformation(const Vector3& x) const override { return x; }
  Vector3 director(const Vector3& x) const override {
    double r = x.norm();
    if (r < 1e-12) return Vector3(0, 0, 1);
    return x / r;
  }
};

}  // namespace

TEST_CASE("box grid matches the documented node counts") {
  GridDomain d = make_box_domain(Vector3(-1, -1, -1), Vector3(1, 1, 1), 0.1);
  CHECK(d.nx == 21);
  CHECK(d.ny == 21);
  CHECK(d.nz == 21);
  CHECK(d.count(NodeClass::Interior) == 19u * 19u * 19u);
  CHECK(d.count(NodeClass::Outside) == 0u);
}

TEST_CASE("ball grid classifies interior and boundary sanely") {
  GridDomain d = make_ball_domain(Vector3::Zero(), 1.0, 0.5);
  CHECK(d.count(NodeClass::Interior) > 0u);
  // every interior node has its six axis neighbors in the shape
  for (int i = 0; i < d.nx; ++i)
    for (int j = 0; j < d.ny; ++j)
      for (int k = 0; k < d.nz; ++k) {
        if (d.cls(i, j, k) != NodeClass::Interior) continue;
        CHECK(d.in_shape(i - 1, j, k));
        CHECK(d.in_shape(i + 1, j, k));
        CHECK(d.in_shape(i, j - 1, k));
        CHECK(d.in_shape(i, j + 1, k));
        CHECK(d.in_shape(i, j, k - 1));
        CHECK(d.in_shape(i, j, k + 1));
      }
}

TEST_CASE("too coarse grids are rejected") {
  CHECK_THROWS_AS(make_ball_domain(Vector3::Zero(), 1.0, 0.8), Error);
  CHECK_THROWS_AS(make_box_domain(Vector3::Zero(), Vector3(1, 1, 0.2), 0.1), Error);
  try {
    make_ball_domain(Vector3::Zero(), 1.0, 0.9);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ResolutionTooCoarse);
  }
}

TEST_CASE("zero-energy base state has exactly zero energy") {
  GridDomain d = make_ball_domain(Vector3::Zero(), 1.0, 1.0 / 32.0);
  CosseratField f = make_field(d, FlipBase{});
  EnergyReport rep = energy(f, MaterialConstants{});
  CHECK(rep.deformation == 0.0);
  CHECK(rep.curvature == 0.0);
  CHECK(rep.total == 0.0);
}

TEST_CASE("constant flip density integrates to 8 x ball volume") {
  GridDomain d = make_ball_domain(Vector3::Zero(), 1.0, 1.0 / 24.0);
  // identity deformation against the flip rotation: density |R - I|^2 = 8
  FunctionSampler s([](const Vector3& x) { return x; },
                    [](const Vector3&) { return Vector3(0, 0, 1); });
  CosseratField f = make_field(d, s);
  EnergyReport rep = energy(f, MaterialConstants{});
  const double h3 = d.h * d.h * d.h;
  CHECK(rep.deformation == doctest::Approx(8.0 * h3 * double(rep.nodes)).epsilon(1e-12));
  // interior-only midpoint rule misses an O(h) boundary shell
  CHECK(rep.deformation ==
        doctest::Approx(8.0 * 4.0 * kPi / 3.0).epsilon(3.5 * d.h));
  CHECK(rep.curvature == 0.0);
}

TEST_CASE("hedgehog curvature over an annulus matches 64 pi (b - a)") {
  const double a = 0.5, b = 1.0, h = 1.0 / 28.0;
  // domain strictly larger than the annulus so every annulus node is interior
  GridDomain d = make_ball_domain(Vector3::Zero(), 1.25 * b, h);
  CosseratField f = make_field(d, Hedgehog{});
  // restrict the midpoint quadrature to the annulus to dodge the center
  // singularity; node_gradient + the covering homothety give the density
  double sum = 0.0;
  for (int i = 0; i < d.nx; ++i)
    for (int j = 0; j < d.ny; ++j)
      for (int k = 0; k < d.nz; ++k) {
        if (d.cls(i, j, k) != NodeClass::Interior) continue;
        double r = d.position(i, j, k).norm();
        if (r <= a || r > b) continue;
        NodeGradient g = node_gradient(f, i, j, k);
        sum += 8.0 * g.Dn_tan.squaredNorm() * h * h * h;
      }
  CHECK(sum == doctest::Approx(64.0 * kPi * (b - a)).epsilon(0.04));
}

TEST_CASE("energy converges with Richardson ratio in [1.5, 4.5]") {
  FunctionSampler s(
      [](const Vector3& x) {
        return Vector3(-x[0] + 0.05 * std::sin(2.0 * x[1]), -x[1], x[2]);
      },
      [](const Vector3& x) {
        return Vector3(0.3 * std::sin(x[0]), 0.2 * std::cos(x[1]), 1.0).normalized();
      });
  double e[3];
  double hs[3] = {1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0};
  for (int level = 0; level < 3; ++level) {
    GridDomain d = make_ball_domain(Vector3::Zero(), 1.0, hs[level]);
    CosseratField f = make_field(d, s);
    e[level] = energy(f, MaterialConstants{}).total;
  }
  double ratio = (e[0] - e[1]) / (e[1] - e[2]);
  CHECK(ratio >= 1.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("energy is deterministic across thread counts") {
  GridDomain d = make_ball_domain(Vector3::Zero(), 1.0, 1.0 / 16.0);
  CosseratField f = make_field(d, Hedgehog{});
  // overwrite center-adjacent values deterministically to avoid fp noise in
  // the comparison (hedgehog is fine as-is; this is belt and braces)
  EnergyReport r1 = energy(f, MaterialConstants{}, 1);
  EnergyReport r4 = energy(f, MaterialConstants{}, 4);
  CHECK(r1.deformation == r4.deformation);
  CHECK(r1.curvature == r4.curvature);
  CHECK(r1.nodes == r4.nodes);
}

TEST_CASE("node_gradient falls back to one-sided stencils at the boundary") {
  GridDomain d = make_box_domain(Vector3::Zero(), Vector3(1, 1, 1), 0.2);
  FunctionSampler s([](const Vector3& x) { return 2.0 * x; },
                    [](const Vector3&) { return Vector3(0, 0, 1); });
  CosseratField f = make_field(d, s);
  NodeGradient g = node_gradient(f, 0, 0, 0);  // corner: all one-sided
  CHECK((g.Dphi - 2.0 * Matrix3::Identity()).norm() < 1e-12);
  CHECK(g.Dn_tan.norm() == 0.0);
  CHECK_THROWS_AS(node_gradient(f, -1, 0, 0), Error);
}

TEST_CASE("disc metrics: flat fields give zero, hedgehog decays with distance") {
  GridDomain d = make_ball_domain(Vector3::Zero(), 1.0, 1.0 / 16.0);
  CosseratField base = make_field(d, FlipBase{});
  DiscMetrics flat = disc_metrics(base, 0.25);
  CHECK(flat.dirichlet_full == 0.0);
  CHECK(flat.jacobian_area == 0.0);
  CHECK(flat.disc_radius == doctest::Approx(std::sqrt(1.0 - 0.0625)));

  CosseratField hh = make_field(d, Hedgehog{});
  double near = disc_energy(hh, 0.25);
  double far = disc_energy(hh, 0.75);
  CHECK(near > far);
  CHECK(far > 0.0);
  CHECK_THROWS_AS(disc_energy(hh, 1.5), Error);
}

TEST_CASE("thin slab surface energy matches thickness x volume energy") {
  const double h = 1.0 / 16.0;
  GridDomain d = make_box_domain(Vector3(-1, -1, -2 * h), Vector3(1, 1, 2 * h), h);
  // constant in the normal (z) direction, high in-plane deformation density
  FunctionSampler s([](const Vector3& x) { return Vector3(-15.0 * x[0], -15.0 * x[1], x[2]); },
                    [](const Vector3&) { return Vector3(0, 0, 1); });
  CosseratField f = make_field(d, s);
  EnergyReport vol = energy(f, MaterialConstants{});

  SurfacePatch patch = make_rect_patch(Vector3::Zero(), Vector3(1, 0, 0),
                                       Vector3(0, 1, 0), 1.0 - 0.5 * h, 1.0 - 0.5 * h,
                                       48, 48);
  PatchValues v = sample_patch(patch, s);
  EnergyReport surf = surface_energy(patch, v, MaterialConstants{}, 1.0);
  const double thickness = (d.nz - 2) * h;  // measure of the interior layers
  CHECK(surf.total * thickness == doctest::Approx(vol.total).epsilon(0.05));
}

TEST_CASE("surface energy of a constant field on the unit sphere") {
  SurfacePatch patch = make_sphere_patch(Vector3::Zero(), 1.0, 48, 96);
  CHECK(patch.area() == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  FunctionSampler s([](const Vector3&) { return Vector3(0.3, -0.1, 0.2); },
                    [](const Vector3&) { return Vector3(0, 0, 1); });
  PatchValues v = sample_patch(patch, s);
  for (double factor : {1.0, 2.0}) {
    EnergyReport rep = surface_energy(patch, v, MaterialConstants{}, factor);
    CHECK(rep.curvature == 0.0);
    // Dphi = 0 so the deformation density is |I|^2 = 3
    CHECK(rep.deformation == doctest::Approx(factor * 3.0 * 4.0 * kPi).epsilon(1e-9));
  }
}

TEST_CASE("surface energy of the sphere hedgehog is 64 pi") {
  SurfacePatch patch = make_sphere_patch(Vector3::Zero(), 1.0, 96, 192);
  Hedgehog s;
  PatchValues v = sample_patch(patch, s);
  EnergyReport rep = surface_energy(patch, v, MaterialConstants{}, 1.0);
  CHECK(rep.curvature == doctest::Approx(64.0 * kPi).epsilon(0.01));
}
