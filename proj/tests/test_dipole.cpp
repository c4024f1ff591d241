#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cosserat/dipole.hpp"
#include "cosserat/energy.hpp"
#include "cosserat/errors.hpp"
#include "cosserat/field.hpp"
#include "cosserat/singularities.hpp"

using namespace cosserat;

namespace {

double dist_to_segment(const Vector3& x, const Vector3& p, const Vector3& q) {
  Vector3 d = q - p;
  double t = (x - p).dot(d) / d.squaredNorm();
  t = std::clamp(t, 0.0, 1.0);
  return (x - p - t * d).norm();
}

ErrorCode thrown_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

// Deformation with a uniform gradient g and a constant director, for driving
// the flip budget: the disc integral grows like g^2 alpha^2.
FunctionSampler stiff_sampler(double g) {
  return FunctionSampler([g](const Vector3& x) { return Vector3(g * x); },
                         [](const Vector3&) { return Vector3(0, 0, 1); });
}

}  // namespace

TEST_CASE("cube face charts are outward and consistent") {
  CubeGeometry cube{Vector3(0.1, -0.2, 0.3), 0.25};

  for (int fid = 0; fid < 6; ++fid) {
    FaceFrame fr = cube.face(fid);
    CHECK(fr.e_u.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fr.e_v.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fr.outward.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((fr.e_u.cross(fr.e_v) - fr.outward).norm() < 1e-14);
    CHECK((fr.origin - cube.center).dot(fr.outward) ==
          doctest::Approx(cube.half).epsilon(1e-14));
    CHECK(std::abs(fr.e_u.dot(fr.outward)) < 1e-14);
    CHECK(std::abs(fr.e_v.dot(fr.outward)) < 1e-14);

    Vector3 xb = fr.origin + 0.11 * fr.e_u - 0.07 * fr.e_v;
    CHECK(cube.face_of(xb) == fid);
    Vector2 uv = cube.face_coords(fid, xb);
    CHECK(uv[0] == doctest::Approx(0.11).epsilon(1e-13));
    CHECK(uv[1] == doctest::Approx(-0.07).epsilon(1e-13));
  }

  Vector3 y = cube.center + cube.half * Vector3(0.3, -0.2, 0.9);
  Vector3 r = cube.retract(y);
  CHECK((r - cube.center).lpNorm<Eigen::Infinity>() ==
        doctest::Approx(cube.half).epsilon(1e-14));
  CHECK(((r - cube.center) - (y - cube.center) / 0.9).norm() < 1e-14);
  CHECK(cube.face_of(r) == 4);
  CHECK_THROWS_AS(cube.retract(cube.center), Error);

  // Retraction of random interior points always lands on the face that
  // face_of names, and the face coordinates stay inside the chart square.
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int it = 0; it < 300; ++it) {
    Vector3 p = cube.center + cube.half * Vector3(u(rng), u(rng), u(rng));
    if ((p - cube.center).lpNorm<Eigen::Infinity>() < 1e-6) continue;
    Vector3 b = cube.retract(p);
    int fid = cube.face_of(p);
    CHECK(fid == cube.face_of(b));
    Vector2 uv = cube.face_coords(fid, b);
    CHECK(std::abs(uv[0]) <= cube.half + 1e-12);
    CHECK(std::abs(uv[1]) <= cube.half + 1e-12);
    FaceFrame fr = cube.face(fid);
    Vector3 rebuilt = fr.origin + uv[0] * fr.e_u + uv[1] * fr.e_v;
    CHECK((rebuilt - b).norm() < 1e-12);
  }
}

TEST_CASE("cuboid decomposition tracks the segment") {
  Vector3 P(0.05, -0.03, -0.2), N(0.1, 0.2, 0.25);
  CuboidDecomposition K = make_cuboid(P, N, 5);
  double d = (N - P).norm();

  CHECK(K.m == 5);
  CHECK(K.d == doctest::Approx(d).epsilon(1e-14));
  CHECK(K.a == doctest::Approx(d / 8.0).epsilon(1e-14));
  CHECK((K.center_world(0) - P).norm() < 1e-15);
  CHECK((K.center_world(4) - N).norm() < 1e-14);
  CHECK((K.frame * K.frame.transpose() - Matrix3::Identity()).norm() < 1e-13);
  CHECK(K.frame.determinant() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK((K.frame.col(2) - (N - P) / d).norm() < 1e-13);
  for (int j = 0; j + 1 < K.m; ++j) {
    CHECK((K.center_world(j + 1) - K.center_world(j)).norm() ==
          doctest::Approx(2.0 * K.a).epsilon(1e-13));
  }
  CHECK(K.cube_local(2).half == doctest::Approx(K.a));
  CHECK((K.to_world(K.to_local(N)) - N).norm() < 1e-14);

  CHECK(K.contains_local(K.to_local(P)));
  CHECK(K.contains_local(K.to_local(0.5 * (P + N))));
  CHECK(!K.contains_local(Vector3(1.01 * K.a, 0.0, K.d / 2.0)));
  CHECK(!K.contains_local(Vector3(0.0, 0.0, -1.01 * K.a)));
  CHECK(K.cube_index(Vector3(0.0, 0.0, 0.1 * K.a)) == 0);
  CHECK(K.cube_index(Vector3(0.0, 0.0, K.d)) == K.m - 1);

  // The chain hugs the segment at Hausdorff distance sqrt(3) a, attained at
  // the outer corners of the end cubes.
  double worst = 0.0;
  for (int j = 0; j < K.m; ++j) {
    for (int s = 0; s < 8; ++s) {
      Vector3 corner = K.center_local(j) +
                       K.a * Vector3(s & 1 ? 1 : -1, s & 2 ? 1 : -1, s & 4 ? 1 : -1);
      double dist = dist_to_segment(K.to_world(corner), P, N);
      CHECK(dist <= std::sqrt(3.0) * K.a + 1e-12);
      worst = std::max(worst, dist);
    }
  }
  CHECK(worst == doctest::Approx(std::sqrt(3.0) * K.a).epsilon(1e-12));

  // Axis-aligned special cases of the frame.
  CuboidDecomposition Kz = make_cuboid(Vector3(0, 0, 0), Vector3(0, 0, 1), 2);
  CHECK((Kz.frame - Matrix3::Identity()).norm() < 1e-12);
  CuboidDecomposition Kd = make_cuboid(Vector3(0, 0, 1), Vector3(0, 0, 0), 2);
  Matrix3 flip = Matrix3::Identity();
  flip(1, 1) = flip(2, 2) = -1.0;
  CHECK((Kd.frame - flip).norm() < 1e-12);

  CHECK_THROWS_AS(make_cuboid(P, P, 3), Error);
  CHECK_THROWS_AS(make_cuboid(P, N, 1), Error);
}

TEST_CASE("dipole sampler is local and continuous") {
  FlipBase base;
  Vector3 P(0.02, -0.01, -0.2), N(0.15, 0.1, 0.22);
  DipoleConstruction con = make_dipole_construction(base, P, N, 4, 0.008);
  const CuboidDecomposition& K = con.K;
  DipoleSampler samp(base, con);

  // Outside the chain the sampler is the base, bitwise.
  for (const Vector3& x : {Vector3(0.5, 0.5, 0.5),
                           K.to_world(Vector3(1.01 * K.a, 0.0, K.d / 2.0))}) {
    Vector3 nb = base.director(x);
    Vector3 ns = samp.director(x);
    CHECK(ns[0] == nb[0]);
    CHECK(ns[1] == nb[1]);
    CHECK(ns[2] == nb[2]);
    CHECK((samp.deformation(x) - base.deformation(x)).norm() == 0.0);
    CHECK(samp.feature_scale(x) == 1.0);
  }

  // Inside, the deformation reads the base at the retracted boundary point.
  Vector3 y(0.2 * K.a, -0.1 * K.a, 2.0 * K.a + 0.4 * K.a);
  Vector3 rel(0.2 * K.a, -0.1 * K.a, 0.4 * K.a);
  Vector3 bd = K.center_local(1) + rel * (K.a / rel.lpNorm<Eigen::Infinity>());
  CHECK((samp.deformation(K.to_world(y)) - base.deformation(K.to_world(bd))).norm() <
        1e-14);
  CHECK(samp.feature_scale(K.to_world(y)) ==
        doctest::Approx(con.alpha * con.alpha));

  // Unit directors inside, including at the cube centers where the
  // retraction direction is pinned by the guard.
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int it = 0; it < 200; ++it) {
    Vector3 yy(K.a * u(rng), K.a * u(rng), (K.d + 2.0 * K.a) * 0.5 * (u(rng) + 1.0) - K.a);
    CHECK(samp.director(K.to_world(yy)).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(samp.director(K.center_world(2)).norm() == doctest::Approx(1.0).epsilon(1e-12));

  // Continuity across the internal face between cubes 0 and 1 and across the
  // outer wall of the chain.
  Vector3 lo = K.to_world(Vector3(0.3 * K.a, -0.2 * K.a, K.a - 1e-8));
  Vector3 hi = K.to_world(Vector3(0.3 * K.a, -0.2 * K.a, K.a + 1e-8));
  CHECK((samp.director(lo) - samp.director(hi)).norm() < 1e-5);
  CHECK((samp.deformation(lo) - samp.deformation(hi)).norm() < 1e-5);
  Vector3 win = K.to_world(Vector3((1.0 - 1e-8) * K.a, 0.1 * K.a, 0.7 * K.a));
  Vector3 wout = K.to_world(Vector3((1.0 + 1e-8) * K.a, 0.1 * K.a, 0.7 * K.a));
  CHECK((samp.director(win) - samp.director(wout)).norm() < 1e-5);
  CHECK((samp.deformation(win) - samp.deformation(wout)).norm() < 1e-5);

  // On the chain axis the retraction hits a bubble core, whose center value
  // is the antipode of the base director.
  Vector3 axis_pt = K.to_world(Vector3(0.0, 0.0, 0.6 * K.a));
  CHECK((samp.director(axis_pt) + Vector3(0, 0, 1)).norm() < 1e-12);

  // Both cubes sharing an internal face read the same boundary director.
  Vector3 shared(0.1 * K.a, 0.2 * K.a, K.a);
  Vector3 from_lower = samp.boundary_director_local(0, shared);
  Vector3 from_upper = samp.boundary_director_local(1, shared);
  CHECK((from_lower - from_upper).norm() == 0.0);
  CHECK((from_lower - samp.director(K.to_world(shared))).norm() < 1e-12);
}

TEST_CASE("cube flip meets the curvature budget on the base state") {
  // The blend annulus costs about 1450 alpha^2 on top of the core wrap while
  // the core only saves 256 pi alpha^2, so the 64 pi + 1 budget binds near
  // alpha = 0.04 and small radii must pass comfortably.
  FlipBase f;
  CubeGeometry cube{Vector3::Zero(), 1.0};
  double alpha = 0.02;

  CubeFlipResult res = cube_flip(f, cube, 4, alpha, 1.0);
  CHECK(res.mod2_before == 0);
  CHECK(res.mod2_after == 1);
  CHECK(res.params.alpha == doctest::Approx(alpha));
  CHECK((res.params.orientation - Matrix3::Identity()).norm() < 1e-12);

  double core = 64.0 * M_PI / (1.0 + 4.0 * alpha * alpha);
  CHECK(res.disc_curvature == doctest::Approx(core).epsilon(0.01));
  CHECK(res.disc_curvature > core);
  CHECK(res.disc_deformation > 0.0);
  CHECK(res.disc_deformation < 1.0);
  CHECK(res.disc_total == doctest::Approx(res.disc_deformation + res.disc_curvature)
                              .epsilon(1e-12));
  CHECK(res.disc_total < 64.0 * M_PI + 1.0);

  // Outside the disc the face field is untouched.
  FaceFrame fr = cube.face(4);
  for (const Vector2& uv : {Vector2(0.3, -0.4), Vector2(-0.8, 0.1)}) {
    Vector3 world = fr.origin + uv[0] * fr.e_u + uv[1] * fr.e_v;
    Vector3 want = f.director(world);
    Vector3 got = res.flipped.value(uv);
    CHECK(got[0] == want[0]);
    CHECK(got[1] == want[1]);
    CHECK(got[2] == want[2]);
  }

  CHECK(thrown_code([&] { cube_flip(f, cube, 4, 1.2, 1.0); }) ==
        ErrorCode::AlphaTooLarge);
}

TEST_CASE("flip threshold finds the budget boundary") {
  CubeFlipOptions fast;
  fast.check_degrees = false;

  // On the zero-energy base at unit scale the annulus overhead makes the
  // budget bind near alpha = 0.042; flips just inside pass, just outside fail.
  FlipBase f;
  CubeGeometry unit_cube{Vector3::Zero(), 0.5};
  double th = find_flip_threshold(f, unit_cube, 4, 1.0, fast);
  CHECK(th > 0.02);
  CHECK(th < 0.08);
  CHECK_NOTHROW(cube_flip(f, unit_cube, 4, 0.95 * th, 1.0, fast));
  CHECK(thrown_code([&] { cube_flip(f, unit_cube, 4, 1.05 * th, 1.0, fast); }) ==
        ErrorCode::AlphaTooLarge);

  // On a cube smaller than the binding radius the face geometry is the cap
  // and the threshold is the full half-width.
  CubeGeometry small_cube{Vector3::Zero(), 0.025};
  double th_cap = find_flip_threshold(f, small_cube, 4, 1.0, fast);
  CHECK(th_cap == doctest::Approx(0.025).epsilon(1e-6));
  CubeFlipResult capped = cube_flip(f, small_cube, 4, th_cap, 1.0, fast);
  CHECK(capped.disc_total < 64.0 * M_PI + 1.0);
  CHECK(capped.disc_curvature ==
        doctest::Approx(64.0 * M_PI / (1.0 + 4.0 * th_cap * th_cap)).epsilon(0.01));

  // A stiff deformation tightens the threshold further.
  FunctionSampler stiff = stiff_sampler(8.0);
  CubeGeometry big{Vector3::Zero(), 1.0};
  double th2 = find_flip_threshold(stiff, big, 4, 1.0, fast);
  CHECK(th2 > 0.01);
  CHECK(th2 < th);
  CHECK_NOTHROW(cube_flip(stiff, big, 4, 0.95 * th2, 1.0, fast));
  CHECK(thrown_code([&] { cube_flip(stiff, big, 4, 1.05 * th2, 1.0, fast); }) ==
        ErrorCode::AlphaTooLarge);

  // A violently stiff deformation admits no radius at all.
  FunctionSampler hopeless = stiff_sampler(2000.0);
  CHECK(thrown_code([&] { find_flip_threshold(hopeless, big, 4, 1.0, fast); }) ==
        ErrorCode::AlphaTooLarge);
}

TEST_CASE("energy audit integrates a pinned deformation exactly") {
  // With a constant deformation the retracted gradient vanishes, so the
  // deformation density is |P(-I)|^2 = 3 everywhere and the audit must
  // reproduce the chain volume. This pins every quadrature weight: disc
  // rings, remainder sectors, side-face cells, and the exact t-integrals.
  FunctionSampler pinned([](const Vector3&) { return Vector3(0.2, -0.1, 0.3); },
                         [](const Vector3&) { return Vector3(0, 0, 1); });
  Vector3 P(0, 0, -0.25), N(0, 0, 0.25);
  int m = 4;
  DipoleConstruction con = make_dipole_construction(pinned, P, N, m, 0.01);
  DipoleAudit audit = audit_dipole_energy(con, pinned);

  double a = con.K.a;
  double volume = 8.0 * a * a * a * m;
  CHECK(audit.deformation == doctest::Approx(3.0 * volume).epsilon(2e-3));

  // Curvature comes only from the bubbles: one cone pair per internal face.
  double per_len = 2.0 * (m - 1) * a * 64.0 * M_PI;
  CHECK(audit.curvature / per_len > 0.95);
  CHECK(audit.curvature / per_len < 1.10);

  // Each bubble cone lands almost entirely in the ball of its cube, so the
  // interior balls carry one cone more than the end balls, and what remains
  // after removing the cones is the 3 * (4/3) pi a^3 ball volume share.
  REQUIRE(static_cast<int>(audit.per_cube.size()) == m);
  double one_cone = audit.curvature / (2.0 * (m - 1));
  const RegionEnergies& end = audit.per_cube[0];
  const RegionEnergies& mid = audit.per_cube[1];
  CHECK(mid.ball - end.ball == doctest::Approx(one_cone).epsilon(0.01));
  CHECK(end.ball - one_cone ==
        doctest::Approx(4.0 * M_PI * a * a * a).epsilon(0.5));
}

TEST_CASE("energy audit matches the chain oracle on the base state") {
  FlipBase base;
  Vector3 P(0, 0, -0.25), N(0, 0, 0.25);
  int m = 4;
  double a = 0.5 / (2.0 * (m - 1));
  double alpha = a / 8.0;
  DipoleConstruction con = make_dipole_construction(base, P, N, m, alpha);

  REQUIRE(static_cast<int>(con.bubbles.size()) == m - 1);
  for (double b : con.disc_budgets) {
    CHECK(b < 64.0 * M_PI + 1.0);
    CHECK(b > 64.0 * M_PI - 5.0);
  }

  DipoleAudit audit = audit_dipole_energy(con, base);

  // Deformation: the retracted pi-rotation costs 40 a^3 per cube.
  CHECK(audit.deformation == doctest::Approx(40.0 * a * a * a * m).epsilon(0.02));

  // Curvature: each internal face carries two cones over one 64 pi wrap.
  double per_len = 2.0 * (m - 1) * a * 64.0 * M_PI;
  CHECK(audit.curvature / per_len > 0.98);
  CHECK(audit.curvature / per_len < 1.10);
  CHECK(audit.total ==
        doctest::Approx(audit.deformation + audit.curvature).epsilon(1e-12));
  CHECK(audit.total < 64.0 * M_PI * 0.5 * 1.15);

  // Region ledger: sums match, symmetry holds, and the wrap cost sits in the
  // balls (the disc cones are nearly all inside the inscribed ball).
  double region_sum = 0.0;
  for (const RegionEnergies& r : audit.per_cube) region_sum += r.total();
  CHECK(region_sum == doctest::Approx(audit.total).epsilon(1e-9));

  const RegionEnergies& r0 = audit.per_cube[0];
  const RegionEnergies& r1 = audit.per_cube[1];
  const RegionEnergies& r2 = audit.per_cube[2];
  const RegionEnergies& r3 = audit.per_cube[3];
  CHECK(r0.ball == doctest::Approx(r3.ball).epsilon(1e-6));
  CHECK(r1.ball == doctest::Approx(r2.ball).epsilon(1e-6));

  double one_cone = audit.curvature / (2.0 * (m - 1));
  CHECK(r0.ball > 0.9 * one_cone);
  CHECK(r0.ball < 1.1 * one_cone);
  CHECK(r1.ball > 1.8 * one_cone);
  CHECK(r1.ball < 2.2 * one_cone);

  // Rerunning the audit is bitwise deterministic.
  DipoleAudit again = audit_dipole_energy(con, base);
  CHECK(again.total == audit.total);
  CHECK(again.deformation == audit.deformation);
  CHECK(again.curvature == audit.curvature);

  // Clipping to growing balls around the midpoint is monotone and converges
  // to the unclipped value.
  DipoleAuditOptions clip;
  clip.clip = true;
  clip.clip_center = 0.5 * (P + N);
  double prev = 0.0;
  for (double radius : {0.1, 0.2, 10.0}) {
    clip.clip_radius = radius;
    double clipped = audit_dipole_energy(con, base, clip).total;
    CHECK(clipped >= prev);
    prev = clipped;
  }
  CHECK(prev == doctest::Approx(audit.total).epsilon(1e-9));
}

TEST_CASE("insert dipole rewrites only the chain") {
  GridDomain dom = make_ball_domain(Vector3::Zero(), 0.6, 1.0 / 24);
  FlipBase base;
  CosseratField f0 = make_field(dom, base);

  Vector3 P(0, 0, -0.2), N(0, 0, 0.2);
  int m = 4;
  double a = 0.4 / (2.0 * (m - 1));
  InsertDipoleResult out = insert_dipole(f0, P, N, m, a / 8.0);
  CHECK(static_cast<int>(out.construction.bubbles.size()) == m - 1);
  CHECK(out.construction.K.a == doctest::Approx(a).epsilon(1e-13));

  const CuboidDecomposition& K = out.construction.K;
  int inside_phi_changed = 0;
  for (int i = 0; i < dom.nx; ++i) {
    for (int j = 0; j < dom.ny; ++j) {
      for (int k = 0; k < dom.nz; ++k) {
        std::size_t id = dom.index(i, j, k);
        bool inside = K.contains_local(K.to_local(dom.position(i, j, k)));
        bool same_phi = out.field.phi[id] == f0.phi[id];
        bool same_n = out.field.n[id] == f0.n[id];
        if (!inside) {
          CHECK(same_phi);
          CHECK(same_n);
        } else if (!same_phi) {
          ++inside_phi_changed;
        }
        CHECK(out.field.dirichlet[id] == f0.dirichlet[id]);
      }
    }
  }
  CHECK(inside_phi_changed > 50);

  EnergyReport rep = energy(out.field, MaterialConstants{});
  CHECK(std::isfinite(rep.total));
  CHECK(rep.deformation > 0.0);

  // Clearance: a chain reaching within a + alpha of the domain wall is
  // rejected, as is a bubble radius at half the cube size.
  CHECK(thrown_code([&] {
          insert_dipole(f0, Vector3(0, 0, -0.55), Vector3(0, 0, 0.55), 4, 0.002);
        }) == ErrorCode::SegmentTooClose);
  CHECK(thrown_code([&] { insert_dipole(f0, P, N, m, 0.5 * a); }) ==
        ErrorCode::AlphaTooLarge);
}

TEST_CASE("degree ledger counts opposite unit charges at the ends") {
  FlipBase base;

  Vector3 P(0, 0, -0.25), N(0, 0, 0.25);
  DipoleConstruction con = make_dipole_construction(base, P, N, 4, 0.5 / 6.0 / 8.0);
  DipoleDegreeLedger led = dipole_degree_ledger(con, base);
  CHECK(led.lift == std::vector<int>{1, 0, 0, -1});
  CHECK(led.mod2 == std::vector<int>{1, 0, 0, 1});

  // A tilted chain carries the same ledger, and the probe radius does not
  // matter as long as the sphere stays inside its cube.
  Vector3 Pt(0.05, -0.04, -0.18), Nt(0.12, 0.16, 0.21);
  CuboidDecomposition Kt = make_cuboid(Pt, Nt, 3);
  DipoleConstruction cont = make_dipole_construction(base, Pt, Nt, 3, Kt.a / 8.0);
  DipoleDegreeLedger led2 = dipole_degree_ledger(cont, base);
  CHECK(led2.lift == std::vector<int>{1, 0, -1});
  CHECK(led2.mod2 == std::vector<int>{1, 0, 1});
  DipoleDegreeLedger led3 = dipole_degree_ledger(cont, base, 0.3);
  CHECK(led3.lift == led2.lift);

  CHECK_THROWS_AS(dipole_degree_ledger(cont, base, 1.5), Error);
}

TEST_CASE("retracted deformation carries no volume charge") {
  // The retracted deformation maps the whole cube onto the image of its
  // boundary, a surface, so no value acquires preimages: every value beyond
  // that surface has winding zero. The surface itself still winds once about
  // the image of the center, exactly as the boundary restriction of the
  // unmodified base does, so that value is kept as the contrast case.
  FlipBase base;
  Vector3 P(0, 0, -0.25), N(0, 0, 0.25);
  DipoleConstruction con = make_dipole_construction(base, P, N, 4, 0.5 / 6.0 / 8.0);
  DipoleSampler samp(base, con);

  double a = con.K.a;
  Vector3 c1 = con.K.center_world(1);
  GridDomain box = make_box_domain(c1 - 1.2 * a * Vector3::Ones(),
                                   c1 + 1.2 * a * Vector3::Ones(), a / 6.0);
  CosseratField f = make_field(box, samp);

  // The boundary image lies within Euclidean distance sqrt(3) a of the
  // reflected center; this offset leaves it with margin.
  Vector3 off_shell = base.deformation(c1) + a * Vector3(2.0, 0.5, -0.3);
  CHECK(map_degree_phi(f, c1, 0.55 * a, off_shell) == 0);
  CHECK(map_degree_phi(f, c1, 0.55 * a, base.deformation(c1)) == 1);
}
