#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "cosserat/commands.hpp"
#include "cosserat/energy.hpp"
#include "cosserat/errors.hpp"
#include "cosserat/io.hpp"

using namespace cosserat;

namespace {

std::vector<char> slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(bool(is));
  return std::vector<char>(std::istreambuf_iterator<char>(is),
                           std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("field files round trip byte-identically") {
  GridDomain d = make_ball_domain(Vector3(0.1, -0.2, 0.0), 0.8, 0.1);
  FunctionSampler s([](const Vector3& x) { return Vector3(-x[0], -x[1], x[2] + 0.01 * x[0]); },
                    [](const Vector3& x) { return Vector3(0.1 * x[0], 0.0, 1.0).normalized(); });
  CosseratField f = make_field(d, s);

  const std::string p1 = "roundtrip_a.csrf", p2 = "roundtrip_b.csrf";
  save_field(f, p1);
  CosseratField g = load_field(p1);
  save_field(g, p2);
  CHECK(slurp(p1) == slurp(p2));

  CHECK(g.domain.nx == f.domain.nx);
  CHECK(g.domain.radius == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(energy(g, MaterialConstants{}).total ==
        energy(f, MaterialConstants{}).total);
  // dirichlet flags re-derived from the boundary class
  for (std::size_t i = 0; i < g.dirichlet.size(); ++i)
    CHECK(int(g.dirichlet[i]) ==
          int(static_cast<NodeClass>(g.domain.node_class[i]) == NodeClass::Boundary));
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("loading garbage fails with FormatError") {
  const std::string p = "garbage.csrf";
  {
    std::ofstream os(p, std::ios::binary);
    os << "not a field file at all";
  }
  try {
    load_field(p);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FormatError);
  }
  std::remove(p.c_str());
}

TEST_CASE("vtk export writes a structured points file") {
  GridDomain d = make_box_domain(Vector3::Zero(), Vector3(0.5, 0.5, 0.5), 0.1);
  CosseratField f = make_field(d, FlipBase{});
  const std::string p = "export_test.vtk";
  export_vtk(f, p);
  std::ifstream is(p);
  REQUIRE(bool(is));
  std::string line;
  std::getline(is, line);
  CHECK(line == "# vtk DataFile Version 3.0");
  bool has_points = false, has_vec = false;
  while (std::getline(is, line)) {
    if (line.rfind("DATASET STRUCTURED_POINTS", 0) == 0) has_points = true;
    if (line.rfind("VECTORS director", 0) == 0) has_vec = true;
  }
  CHECK(has_points);
  CHECK(has_vec);
  std::remove(p.c_str());
}

TEST_CASE("cli binary parses and reports usage") {
  std::string cmd = std::string(CLI_BINARY_PATH) + " --help > cli_help.txt 2>&1";
  int rc = std::system(cmd.c_str());
  CHECK(rc == 0);
  std::ifstream is("cli_help.txt");
  std::string text((std::istreambuf_iterator<char>(is)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("minimize") != std::string::npos);
  CHECK(text.find("insert-dipole") != std::string::npos);
  std::remove("cli_help.txt");
}

TEST_CASE("build-boundary command writes a deterministic manifest") {
  Json cfg{{"n_target", 1}, {"epsilon", 2e-3}, {"h", 0.125}, {"with_ledgers", false}};
  Json m1 = run_command("build-boundary", cfg, "cmd_bb_a", 1, false);

  CHECK(m1.at("command") == "build-boundary");
  const double e = m1.at("energy").get<double>();
  CHECK(e > 0.7);
  CHECK(e < M_PI);
  CHECK(m1.at("energy_budget").get<double>() == doctest::Approx(M_PI));
  CHECK(m1.at("config").at("m") == 3);
  CHECK(m1.at("config").at("alpha_ratio") == doctest::Approx(0.125));
  CHECK(m1.at("separation").at("pass") == true);
  REQUIRE(m1.at("dipoles").size() == 2);
  CHECK(!m1.at("dipoles")[0].contains("ledger"));  // disabled above
  CHECK(m1.at("trace").at("mod2") == 0);

  // the manifest file holds exactly the returned object
  std::vector<char> bytes = slurp("cmd_bb_a/manifest-build-boundary.json");
  CHECK(std::string(bytes.begin(), bytes.end()) == m1.dump(2) + "\n");

  CosseratField g = load_field("cmd_bb_a/boundary.csrf");
  CHECK(g.domain.shape == ShapeTag::Ball);
  CHECK(g.domain.radius == doctest::Approx(2.0));

  // reruns are byte-identical
  run_command("build-boundary", cfg, "cmd_bb_b", 1, false);
  CHECK(slurp("cmd_bb_a/manifest-build-boundary.json") ==
        slurp("cmd_bb_b/manifest-build-boundary.json"));
  CHECK(slurp("cmd_bb_a/boundary.csrf") == slurp("cmd_bb_b/boundary.csrf"));

  // guard and config errors surface with their codes
  Json tight{{"n_target", 3}, {"epsilon", 0.1}, {"h", 0.125}};
  try {
    run_command("build-boundary", tight, "cmd_bb_c", 1, false);
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::SeparationViolated);
  }
  Json typo = cfg;
  typo["bogus"] = 1;
  try {
    run_command("build-boundary", typo, "cmd_bb_c", 1, false);
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::FormatError);
  }
  try {
    run_command("frobnicate", cfg, "cmd_bb_c", 1, false);
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::InvalidArgument);
  }
  std::filesystem::remove_all("cmd_bb_a");
  std::filesystem::remove_all("cmd_bb_b");
  std::filesystem::remove_all("cmd_bb_c");
}

TEST_CASE("insert-dipole command reports regions, budgets, and the ledger") {
  Json cfg{{"domain", Json{{"shape", "box"},
                           {"lo", Json::array({-0.75, -0.75, -1.0})},
                           {"hi", Json::array({0.75, 0.75, 1.0})},
                           {"h", 0.03125}}},
           {"p", Json::array({0.01, 0.01, -0.26})},
           {"n", Json::array({0.01, 0.01, 0.24})},
           {"m", 2},
           {"alpha", 0.03}};
  Json m = run_command("insert-dipole", cfg, "cmd_ins", 1, false);

  // a two-cube chain is one straight tube of length d: energy about 64 pi d
  const double e = m.at("energy").get<double>();
  CHECK(e > 64.0 * M_PI * 0.5 * 0.95);
  CHECK(e < 64.0 * M_PI * 0.5 * 1.2);
  CHECK(m.at("regions").at("ball").get<double>() > 100.0);
  CHECK(m.at("regions").at("rest").get<double>() < 1.0);
  CHECK(m.at("regions").at("total").get<double>() == doctest::Approx(e));
  for (const char* key :
       {"ball", "bottom_disc", "top_disc", "bottom_annulus", "top_annulus", "rest"})
    CHECK(m.at("regions").contains(key));
  REQUIRE(m.at("per_cube").size() == 2);

  // endpoint-only chain: the ledger carries the two unit-degree points
  CHECK(m.at("ledger").at("lift") == Json::array({1, -1}));
  CHECK(m.at("ledger").at("mod2") == Json::array({1, 1}));
  // at this alpha the blend annulus adds a real fraction of the +1 allowance
  REQUIRE(m.at("disc_budgets").size() == 1);
  const double b = m.at("disc_budgets")[0].get<double>();
  CHECK(b > 64.0 * M_PI - 0.75);
  CHECK(b < 64.0 * M_PI + 1.0);

  // at alpha below the grid spacing the nodal field keeps the base bits
  // almost everywhere, so the grid sees next to nothing of the insertion
  CHECK(m.at("singularities").size() == 0);
  CHECK(m.at("grid_energy").at("total").get<double>() < 2.0);

  CosseratField f = load_field("cmd_ins/dipole.csrf");
  CHECK(f.domain.shape == ShapeTag::Box);

  // guards: alpha at half the cube width no longer fits a flip disc
  Json wide = cfg;
  wide["alpha"] = 0.26;
  try {
    run_command("insert-dipole", wide, "cmd_ins", 1, false);
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::AlphaTooLarge);
  }
  Json neither = cfg;
  neither.erase("domain");
  try {
    run_command("insert-dipole", neither, "cmd_ins", 1, false);
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::FormatError);
  }
  std::filesystem::remove_all("cmd_ins");
}

TEST_CASE("energy, analyze, and export commands work on a stored field") {
  // a resolvable point charge: one defect inside slice 1, winding visible on
  // the boundary sphere
  const Vector3 p(0.1, -0.05, 0.35);
  FunctionSampler hedgehog([](const Vector3& x) { return x; },
                           [p](const Vector3& x) -> Vector3 {
                             return (x - p).normalized();
                           });
  GridDomain d = make_ball_domain(Vector3::Zero(), 1.0, 1.0 / 16.0);
  CosseratField f = make_field(d, hedgehog);
  save_field(f, "cmd_field.csrf");

  Json em = run_command("energy", Json{{"field", "cmd_field.csrf"}}, "cmd_an", 1, false);
  EnergyReport er = energy(f, MaterialConstants{});
  CHECK(em.at("energy").get<double>() == er.total);
  CHECK(em.at("deformation").get<double>() == er.deformation);
  CHECK(em.at("domain").at("shape") == "ball");

  Json acfg{{"field", "cmd_field.csrf"}, {"n_target", 1}, {"epsilon", 0.05},
            {"disc_budget", 1e4}};
  Json am = run_command("analyze", acfg, "cmd_an", 1, false);
  CHECK(am.at("count") == 1);
  REQUIRE(am.at("singularities").size() == 1);
  const Json& s = am.at("singularities")[0];
  CHECK(s.at("mod2_degree") == 1);
  CHECK(s.at("degrees_available") == true);
  for (int c = 0; c < 3; ++c)
    CHECK(std::abs(s.at("location")[c].get<double>() - p[c]) < 0.125);
  CHECK(std::abs(am.at("surface").at("degree").get<int>()) == 1);
  CHECK(am.at("surface").at("mod2") == 1);
  CHECK(am.at("slices").at("slice_mod2") == Json::array({1}));
  CHECK(am.at("slices").at("singularities_per_slice") == Json::array({1}));
  CHECK(am.at("audit").at("pass") == false);  // a unit-scale charge is hot
  CHECK(slurp("cmd_an/slices.json").size() > 2);

  Json xm = run_command("export", Json{{"field", "cmd_field.csrf"}}, "cmd_an", 1, false);
  CHECK(xm.at("files").at("vtk") == "field.vtk");
  std::vector<char> vtk = slurp("cmd_an/field.vtk");
  CHECK(std::string(vtk.begin(), vtk.begin() + 26) == "# vtk DataFile Version 3.0");

  // a corrupted field file is rejected with FormatError
  {
    std::ofstream os("cmd_bad.csrf", std::ios::binary);
    os << "CSRF1 but then nonsense";
  }
  try {
    run_command("energy", Json{{"field", "cmd_bad.csrf"}}, "cmd_an", 1, false);
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::FormatError);
  }
  std::remove("cmd_field.csrf");
  std::remove("cmd_bad.csrf");
  std::filesystem::remove_all("cmd_an");
}

TEST_CASE("minimize command writes trace and slice reports") {
  GridDomain d = make_ball_domain(Vector3::Zero(), 1.0, 1.0 / 8.0);
  CosseratField f = make_field(d, FlipBase{});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (std::size_t i = 0; i < f.phi.size(); ++i) {
    if (f.dirichlet[i] ||
        static_cast<NodeClass>(f.domain.node_class[i]) != NodeClass::Interior)
      continue;
    f.phi[i] += 0.02 * Vector3(uni(rng), uni(rng), uni(rng));
    f.n[i] = (f.n[i] + 0.05 * Vector3(uni(rng), uni(rng), uni(rng))).normalized();
  }
  save_field(f, "cmd_min_in.csrf");

  Json cfg{{"field", "cmd_min_in.csrf"}, {"max_iters", 60}, {"grad_tol", 1e-8},
           {"n_target", 1}, {"epsilon", 0.05}};
  Json m = run_command("minimize", cfg, "cmd_min", 1, false);

  CHECK(m.at("initial_energy").get<double>() > 0.0);
  CHECK(m.at("final_energy").get<double>() < m.at("initial_energy").get<double>());
  CHECK(m.at("final_energy").get<double>() < 0.05);
  const int iters = m.at("iterations").get<int>();
  CHECK(iters >= 1);
  CHECK(m.at("stop_reason").is_string());
  CHECK(m.at("audit").at("pass") == true);
  CHECK(m.at("slices").at("slice_mod2") == Json::array({0}));
  CHECK(m.at("singularities").size() == 0);

  // the trace has one labeled row per iteration
  std::vector<char> tb = slurp("cmd_min/trace.csv");
  std::string trace(tb.begin(), tb.end());
  int lines = 0;
  for (char c : trace) lines += c == '\n';
  CHECK(lines == iters + 1);
  CHECK(trace.rfind("iter,energy,deformation,curvature,grad_norm,step\n", 0) == 0);

  CosseratField out = load_field("cmd_min/minimized.csrf");
  CHECK(energy(out, MaterialConstants{}).total ==
        doctest::Approx(m.at("final_energy").get<double>()).epsilon(1e-12));

  std::remove("cmd_min_in.csrf");
  std::filesystem::remove_all("cmd_min");
}

TEST_CASE("cli reports json errors with exit code 2") {
  {
    std::ofstream os("cmd_cli_cfg.json");
    os << "{}";
  }
  std::string cmd = std::string(CLI_BINARY_PATH) +
                    " build-boundary --config cmd_cli_cfg.json --out cmd_cli_out"
                    " > cmd_cli_err.json 2>/dev/null";
  int rc = std::system(cmd.c_str());
  CHECK(rc != 0);
  std::vector<char> eb = slurp("cmd_cli_err.json");
  Json err = Json::parse(std::string(eb.begin(), eb.end()));
  CHECK(err.at("error").at("name") == "FormatError");
  CHECK(err.at("error").at("message").is_string());
  std::remove("cmd_cli_cfg.json");
  std::remove("cmd_cli_err.json");
  std::filesystem::remove_all("cmd_cli_out");
}
