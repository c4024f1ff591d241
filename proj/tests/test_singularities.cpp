#include <doctest.h>

#include <cmath>
#include <complex>

#include "cosserat/energy.hpp"
#include "cosserat/errors.hpp"
#include "cosserat/singularities.hpp"
#include "cosserat/trisurface.hpp"

using namespace cosserat;

namespace {

// Two point defects glued through Riemann-sphere arithmetic: project each
// unit hedgehog direction stereographically, multiply in the plane, map back.
// Multiplying keeps both local degrees +1 (a sum would cancel along a steep
// mid-plane curve and confuse any grid); conjugating the second factor first
// reverses its local orientation and gives a true +1/-1 pair. The endpoints
// must not be vertically aligned or the factors hit 0 times infinity.
struct TwoPointSampler final : public FieldSampler {
  Vector3 P, N;
  bool conjugate_second = false;

  TwoPointSampler(const Vector3& p, const Vector3& n, bool conj)
      : P(p), N(n), conjugate_second(conj) {}

  static std::complex<double> project(const Vector3& u) {
    double denom = 1.0 - u[2];
    if (denom < 1e-12) return {1e12, 0.0};
    return {u[0] / denom, u[1] / denom};
  }

  Vector3 deformation(const Vector3& x) const override { return x; }
  Vector3 director(const Vector3& x) const override {
    std::complex<double> zp = project((x - P).normalized());
    std::complex<double> zn = project((x - N).normalized());
    if (conjugate_second) zn = std::conj(zn);
    std::complex<double> w = zp * zn;
    double r2 = std::norm(w);
    if (!std::isfinite(r2) || r2 > 1e24) return Vector3(0, 0, 1);
    return Vector3(2.0 * w.real(), 2.0 * w.imag(), r2 - 1.0) / (r2 + 1.0);
  }
};

struct HedgehogSampler final : public FieldSampler {
  Vector3 a;
  explicit HedgehogSampler(const Vector3& a_) : a(a_) {}
  Vector3 deformation(const Vector3& x) const override { return x; }
  Vector3 director(const Vector3& x) const override {
    return (x - a).normalized();
  }
};

struct ConstantSampler final : public FieldSampler {
  Vector3 deformation(const Vector3& x) const override { return x; }
  Vector3 director(const Vector3&) const override { return Vector3(0, 0, 1); }
};

}  // namespace

TEST_CASE("smooth fields report no singularities") {
  GridDomain d = make_ball_domain(Vector3::Zero(), 1.0, 1.0 / 12.0);
  CosseratField f = make_field(d, ConstantSampler{});
  CHECK(find_singularities(f, 0.25).empty());
  CosseratField g = make_field(d, FlipBase{});
  CHECK(find_singularities(g, 0.25).empty());
}

TEST_CASE("hedgehog is localized within one cell with degree one") {
  const double h = 1.0 / 12.0;
  Vector3 a(h / 3.0, h / 3.0, h / 3.0);
  GridDomain d = make_ball_domain(Vector3::Zero(), 1.0, h);
  CosseratField f = make_field(d, HedgehogSampler{a});

  auto points = find_singularities(f, 0.3);
  REQUIRE(points.size() == 1);
  CHECK((points[0].location - a).norm() < h);
  CHECK(points[0].degrees_available);
  CHECK(points[0].mod2 == 1);
  CHECK(std::abs(points[0].lift_degree) == 1);
  CHECK(points[0].cluster_size >= 1);

  // degree must not depend on the probe radius while no singularity crosses
  for (double r : {0.2, 0.3, 0.4}) {
    auto pts = find_singularities(f, r);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].mod2 == 1);
    CHECK(std::abs(pts[0].lift_degree) == 1);
  }

  // a stricter flag angle still isolates the same core
  SingularityOptions opts;
  opts.flag_angle_deg = 120.0;
  auto strict = find_singularities(f, 0.3, opts);
  REQUIRE(strict.size() == 1);
  CHECK(strict[0].mod2 == 1);
}

TEST_CASE("probe validation") {
  GridDomain d = make_ball_domain(Vector3::Zero(), 1.0, 1.0 / 8.0);
  CosseratField f = make_field(d, ConstantSampler{});
  CHECK_THROWS_AS(find_singularities(f, 0.1), Error);  // under two cells
}

TEST_CASE("close pair is reported but marked unseparable") {
  // separation must be well over ten cells or the low-magnitude band
  // between the defects also flags and bridges the clusters
  const double h = 1.0 / 32.0;
  // off the projection pole axis and off-lattice so neither endpoint sits on
  // the other's needle ray or on a grid node
  Vector3 P(-0.25 + h / 3, h / 3, h / 3), N(0.25 + h / 3, h / 3, h / 3);
  GridDomain d = make_ball_domain(Vector3::Zero(), 1.0, h);
  CosseratField f = make_field(d, TwoPointSampler{P, N, false});

  auto points = find_singularities(f, 0.35);  // 2r = 0.7 > separation
  REQUIRE(points.size() == 2);
  for (const auto& p : points) {
    CHECK(p.ambiguous_separation);
    CHECK_FALSE(p.degrees_available);
  }
}

TEST_CASE("same-sign pair and dipole pair have the expected signed degrees") {
  // separation must be well over ten cells or the low-magnitude band
  // between the defects also flags and bridges the clusters
  const double h = 1.0 / 32.0;
  // off the projection pole axis and off-lattice so neither endpoint sits on
  // the other's needle ray or on a grid node
  Vector3 P(-0.25 + h / 3, h / 3, h / 3), N(0.25 + h / 3, h / 3, h / 3);
  GridDomain d = make_ball_domain(Vector3::Zero(), 1.0, h);

  CosseratField same = make_field(d, TwoPointSampler{P, N, false});
  auto pts = find_singularities(same, 0.15);
  REQUIRE(pts.size() == 2);
  int sum = 0;
  for (const auto& p : pts) {
    CHECK(p.degrees_available);
    CHECK(p.mod2 == 1);
    sum += p.lift_degree;
  }
  CHECK(std::abs(sum) == 2);  // like-oriented defects add up

  CosseratField dip = make_field(d, TwoPointSampler{P, N, true});
  auto dpts = find_singularities(dip, 0.15);
  REQUIRE(dpts.size() == 2);
  int dsum = 0;
  for (const auto& p : dpts) {
    CHECK(p.mod2 == 1);
    dsum += p.lift_degree;
  }
  CHECK(dsum == 0);  // opposite orientations cancel

  // additivity seen from an enclosing sphere in the same director gauge
  FieldInterpolator si(same), di(dip);
  auto same_dir = [&](const Vector3& x) { return si.director(x); };
  auto dip_dir = [&](const Vector3& x) { return di.director(x); };
  StarSurface shell = star_sphere(Vector3(h / 3, h / 3, h / 3), 0.6);
  CHECK(std::abs(surface_degree(shell, same_dir).degree) == 2);
  CHECK(surface_degree(shell, dip_dir).degree == 0);
}

TEST_CASE("verify_dipole accepts the true pair and rejects impostors") {
  // separation must be well over ten cells or the low-magnitude band
  // between the defects also flags and bridges the clusters
  const double h = 1.0 / 32.0;
  // off the projection pole axis and off-lattice so neither endpoint sits on
  // the other's needle ray or on a grid node
  Vector3 P(-0.25 + h / 3, h / 3, h / 3), N(0.25 + h / 3, h / 3, h / 3);
  GridDomain d = make_ball_domain(Vector3::Zero(), 1.0, h);

  CosseratField dip = make_field(d, TwoPointSampler{P, N, true});
  DipoleRecord rec = verify_dipole(dip, P, N, 0.3);
  CHECK(rec.geometry_ok);
  CHECK(rec.interior_clean);
  CHECK(rec.endpoint_mod2_ok);
  CHECK(rec.degrees_opposite);
  CHECK(rec.verified);
  CHECK(rec.lift_degree_P == -rec.lift_degree_N);
  CHECK(std::abs(rec.lift_degree_P) == 1);

  // same mod-2 data but equal lift orientation: clause three must fail
  CosseratField same = make_field(d, TwoPointSampler{P, N, false});
  DipoleRecord bad = verify_dipole(same, P, N, 0.3);
  CHECK(bad.endpoint_mod2_ok);
  CHECK(bad.interior_clean);
  CHECK_FALSE(bad.degrees_opposite);
  CHECK_FALSE(bad.verified);

  // smooth field: no singularities at all
  CosseratField flat = make_field(d, ConstantSampler{});
  DipoleRecord none = verify_dipole(flat, P, N, 0.3);
  CHECK_FALSE(none.interior_clean);
  CHECK_FALSE(none.endpoint_mod2_ok);
  CHECK_FALSE(none.verified);

  // cylinder sticking out of the ball: geometry check fails first
  DipoleRecord out =
      verify_dipole(dip, Vector3(-0.7, 0, 0), Vector3(0.7, 0, 0), 0.5);
  CHECK_FALSE(out.geometry_ok);
  CHECK_FALSE(out.verified);
}

TEST_CASE("rim-hugging defect is reported without degrees when the probe cannot fit") {
  const double h = 1.0 / 16.0;
  GridDomain d = make_box_domain(Vector3(-0.5, -0.5, -0.5),
                                 Vector3(0.5, 0.5, 0.5), h);
  Vector3 a(0.4 + h / 3.0, h / 3.0, h / 3.0);
  CosseratField f = make_field(d, HedgehogSampler{a});
  auto points = find_singularities(f, 2.0 * h);
  REQUIRE(points.size() == 1);
  CHECK((points[0].location - a).norm() < 1.5 * h);
  CHECK_FALSE(points[0].degrees_available);
}

TEST_CASE("deformation degree on probe spheres") {
  const double h = 1.0 / 16.0;
  GridDomain d = make_ball_domain(Vector3::Zero(), 1.0, h);
  CosseratField ident = make_field(d, ConstantSampler{});  // phi = x
  CHECK(map_degree_phi(ident, Vector3::Zero(), 0.5, Vector3::Zero()) == 1);
  CHECK(map_degree_phi(ident, Vector3(0.3, 0, 0), 0.2,
                       Vector3(0.9, 0, 0)) == 0);

  struct Pinned final : public FieldSampler {
    Vector3 deformation(const Vector3&) const override {
      return Vector3(0.3, 0, 0);
    }
    Vector3 director(const Vector3&) const override { return Vector3(0, 0, 1); }
  };
  CosseratField flat = make_field(d, Pinned{});
  CHECK(map_degree_phi(flat, Vector3::Zero(), 0.5, Vector3::Zero()) == 0);
  CHECK_THROWS_AS(
      map_degree_phi(flat, Vector3::Zero(), 0.5, Vector3(0.3, 0, 0)), Error);
}
