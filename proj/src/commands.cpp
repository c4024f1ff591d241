#include "cosserat/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "cosserat/boundary_data.hpp"
#include "cosserat/dipole.hpp"
#include "cosserat/energy.hpp"
#include "cosserat/errors.hpp"
#include "cosserat/field.hpp"
#include "cosserat/io.hpp"
#include "cosserat/minimize.hpp"
#include "cosserat/singularities.hpp"
#include "cosserat/slice.hpp"
#include "cosserat/trisurface.hpp"

namespace cosserat {

namespace fs = std::filesystem;

namespace {

// Config plumbing. Unknown keys are rejected so a typo cannot silently fall
// back to a default; every getter validates the JSON type it consumes.

void ensure_keys(const Json& cfg, std::initializer_list<const char*> allowed,
                 const std::string& command) {
  if (!cfg.is_object())
    fail(ErrorCode::FormatError, "config for " + command + " must be a JSON object");
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known)
      fail(ErrorCode::FormatError,
           "unknown config key '" + it.key() + "' for " + command);
  }
}

double get_num(const Json& cfg, const char* key, double def) {
  if (!cfg.contains(key)) return def;
  const Json& v = cfg.at(key);
  if (!v.is_number())
    fail(ErrorCode::FormatError, "config key '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

double need_num(const Json& cfg, const char* key) {
  if (!cfg.contains(key))
    fail(ErrorCode::FormatError, "config key '" + std::string(key) + "' is required");
  return get_num(cfg, key, 0.0);
}

int get_int(const Json& cfg, const char* key, int def) {
  if (!cfg.contains(key)) return def;
  const Json& v = cfg.at(key);
  if (!v.is_number_integer())
    fail(ErrorCode::FormatError, "config key '" + std::string(key) + "' must be an integer");
  return v.get<int>();
}

int need_int(const Json& cfg, const char* key) {
  if (!cfg.contains(key))
    fail(ErrorCode::FormatError, "config key '" + std::string(key) + "' is required");
  return get_int(cfg, key, 0);
}

bool get_bool(const Json& cfg, const char* key, bool def) {
  if (!cfg.contains(key)) return def;
  const Json& v = cfg.at(key);
  if (!v.is_boolean())
    fail(ErrorCode::FormatError, "config key '" + std::string(key) + "' must be a boolean");
  return v.get<bool>();
}

std::string get_str(const Json& cfg, const char* key, const std::string& def) {
  if (!cfg.contains(key)) return def;
  const Json& v = cfg.at(key);
  if (!v.is_string())
    fail(ErrorCode::FormatError, "config key '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

std::string need_str(const Json& cfg, const char* key) {
  if (!cfg.contains(key))
    fail(ErrorCode::FormatError, "config key '" + std::string(key) + "' is required");
  return get_str(cfg, key, "");
}

Vector3 need_vec3(const Json& cfg, const char* key) {
  if (!cfg.contains(key))
    fail(ErrorCode::FormatError, "config key '" + std::string(key) + "' is required");
  const Json& v = cfg.at(key);
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
      !v[2].is_number())
    fail(ErrorCode::FormatError,
         "config key '" + std::string(key) + "' must be an array of 3 numbers");
  return Vector3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

Json vec_json(const Vector3& v) { return Json::array({v[0], v[1], v[2]}); }

MaterialConstants constants_from(const Json& cfg, Json& resolved) {
  MaterialConstants c;
  if (cfg.contains("constants")) {
    const Json& j = cfg.at("constants");
    ensure_keys(j, {"mu1", "muc", "mu2", "lambda", "p"}, "constants");
    c.mu1 = get_num(j, "mu1", c.mu1);
    c.muc = get_num(j, "muc", c.muc);
    c.mu2 = get_num(j, "mu2", c.mu2);
    c.lambda = get_num(j, "lambda", c.lambda);
    c.p = get_num(j, "p", c.p);
  }
  resolved = Json{{"mu1", c.mu1}, {"muc", c.muc}, {"mu2", c.mu2},
                  {"lambda", c.lambda}, {"p", c.p}};
  return c;
}

GridDomain domain_from_json(const Json& j, Json& resolved) {
  ensure_keys(j, {"shape", "h", "center", "radius", "lo", "hi"}, "domain");
  const std::string shape = need_str(j, "shape");
  const double h = need_num(j, "h");
  if (shape == "ball") {
    const Vector3 c = need_vec3(j, "center");
    const double r = need_num(j, "radius");
    resolved = Json{{"shape", "ball"}, {"center", vec_json(c)}, {"radius", r}, {"h", h}};
    return make_ball_domain(c, r, h);
  }
  if (shape == "box") {
    const Vector3 lo = need_vec3(j, "lo"), hi = need_vec3(j, "hi");
    resolved = Json{{"shape", "box"}, {"lo", vec_json(lo)}, {"hi", vec_json(hi)}, {"h", h}};
    return make_box_domain(lo, hi, h);
  }
  fail(ErrorCode::FormatError, "domain shape must be 'ball' or 'box'");
}

const char* shape_name(ShapeTag t) {
  switch (t) {
    case ShapeTag::Ball:
      return "ball";
    case ShapeTag::Box:
      return "box";
    case ShapeTag::Cuboid:
      return "cuboid";
  }
  return "unknown";
}

Json domain_json(const GridDomain& d) {
  Json j;
  j["shape"] = shape_name(d.shape);
  j["h"] = d.h;
  j["dims"] = Json::array({d.nx, d.ny, d.nz});
  j["interior_nodes"] = d.count(NodeClass::Interior);
  if (d.shape == ShapeTag::Ball) {
    j["center"] = vec_json(d.center);
    j["radius"] = d.radius;
  } else {
    j["lo"] = vec_json(d.shape_lo);
    j["hi"] = vec_json(d.shape_hi);
  }
  return j;
}

Json singularities_json(const std::vector<SingularPoint>& pts) {
  Json arr = Json::array();
  for (const SingularPoint& s : pts) {
    Json e;
    e["location"] = vec_json(s.location);
    e["mod2_degree"] = s.mod2;
    e["lift_degree"] = s.lift_degree;
    e["degrees_available"] = s.degrees_available;
    e["ambiguous_separation"] = s.ambiguous_separation;
    e["probe_radius"] = s.probe_radius;
    e["cluster_size"] = s.cluster_size;
    arr.push_back(e);
  }
  return arr;
}

Json regions_json(const RegionEnergies& r) {
  return Json{{"ball", r.ball},
              {"bottom_disc", r.bottom_disc},
              {"top_disc", r.top_disc},
              {"bottom_annulus", r.bottom_annulus},
              {"top_annulus", r.top_annulus},
              {"rest", r.rest},
              {"total", r.total()}};
}

Json slice_report_json(const SliceReport& rep) {
  Json j;
  j["lambdas"] = rep.lambdas;
  Json discs = Json::array();
  for (const DiscReport& d : rep.discs) {
    discs.push_back(Json{{"mu", d.mu},
                         {"band", Json::array({d.band_lo, d.band_hi})},
                         {"energy", d.energy},
                         {"jacobian_upper", d.jacobian_upper},
                         {"jacobian_direct", d.jacobian_direct},
                         {"admissible", d.admissible}});
  }
  j["discs"] = discs;
  j["slice_mod2"] = rep.slice_mod2;
  j["singularities_per_slice"] = rep.singularities_per_slice;
  j["measure_threshold"] = rep.measure_threshold;
  return j;
}

Json audit_json(const MinimizerAudit& audit) {
  Json checks = Json::array();
  for (const AuditCheck& c : audit.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"pass", c.pass},
                          {"measured", c.measured},
                          {"threshold", c.threshold}});
  }
  return Json{{"pass", audit.pass}, {"checks", checks}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorCode::Internal, "cannot open '" + path.string() + "' for writing");
  os << text;
  if (!os) fail(ErrorCode::Internal, "write to '" + path.string() + "' failed");
}

void write_trace_csv(const fs::path& path, const std::vector<TraceRow>& trace) {
  std::string text = "iter,energy,deformation,curvature,grad_norm,step\n";
  char line[256];
  for (const TraceRow& r : trace) {
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.iter,
                  r.energy, r.deformation, r.curvature, r.grad_norm, r.step);
    text += line;
  }
  write_text(path, text);
}

// Slice diagnostics plus the post-run audit, shared by minimize and analyze.
// A band without an admissible disc is recorded in the manifest rather than
// aborting the command; every other error propagates.
void slice_section(const CosseratField& f, const Json& cfg, Json& manifest,
                   const fs::path& out, const std::string& slices_name,
                   const MaterialConstants& constants) {
  const int n_target = need_int(cfg, "n_target");
  const double epsilon = need_num(cfg, "epsilon");
  SliceOptions so;
  so.constants = constants;
  so.disc_budget = get_num(cfg, "disc_budget", so.disc_budget);
  so.probe_radius = get_num(cfg, "probe_radius", 0.0);
  manifest["audit"] = audit_json(minimizer_energy_audit(f, n_target, epsilon, so));
  try {
    SliceReport rep = slice_diagnostics(f, n_target, epsilon, so);
    Json rj = slice_report_json(rep);
    write_text(out / slices_name, rj.dump(2) + "\n");
    manifest["slices"] = rj;
    manifest["files"]["slices"] = slices_name;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoAdmissibleDisc) throw;
    manifest["slices"] =
        Json{{"error", Json{{"name", "NoAdmissibleDisc"}, {"message", e.what()}}}};
  }
}

Json cmd_build_boundary(const Json& cfg, const fs::path& out, bool verbose) {
  ensure_keys(cfg,
              {"n_target", "epsilon", "h", "m", "alpha_ratio", "with_ledgers",
               "trace_polar", "trace_azimuth", "field"},
              "build-boundary");
  const int n_target = need_int(cfg, "n_target");
  const double epsilon = need_num(cfg, "epsilon");
  const double h = need_num(cfg, "h");
  BoundaryDataOptions opts;
  opts.m = get_int(cfg, "m", opts.m);
  opts.alpha_ratio = get_num(cfg, "alpha_ratio", opts.alpha_ratio);
  opts.with_ledgers = get_bool(cfg, "with_ledgers", opts.with_ledgers);
  opts.trace_polar = get_int(cfg, "trace_polar", opts.trace_polar);
  opts.trace_azimuth = get_int(cfg, "trace_azimuth", opts.trace_azimuth);
  const std::string field_name = get_str(cfg, "field", "boundary.csrf");

  if (verbose)
    std::fprintf(stderr, "build-boundary: n_target=%d epsilon=%g h=%g\n", n_target,
                 epsilon, h);
  BoundaryData bd = build_boundary_data(n_target, epsilon, h, opts);
  save_field(bd.g_tilde, (out / field_name).string());

  Json m;
  m["config"] = Json{{"n_target", n_target},
                     {"epsilon", epsilon},
                     {"h", h},
                     {"m", opts.m},
                     {"alpha_ratio", opts.alpha_ratio},
                     {"with_ledgers", opts.with_ledgers},
                     {"trace_polar", opts.trace_polar},
                     {"trace_azimuth", opts.trace_azimuth},
                     {"field", field_name}};
  m["energy"] = bd.unit_ball_energy;
  m["energy_budget"] = bd.energy_budget;
  m["chain_energy"] = bd.chain_energy;
  m["linear_bound"] = bd.linear_bound;
  m["separation"] = Json{{"min_tube_gap", bd.min_tube_gap},
                         {"required_gap", 1.0 / (4.0 * n_target)},
                         {"pass", true}};
  m["trace"] = Json{{"mod2", bd.trace_mod2}, {"lift_degree", bd.trace_lift_degree}};

  Json dipoles = Json::array();
  for (std::size_t i = 0; i < bd.dipoles.size(); ++i) {
    const DipoleConstruction& con = bd.dipoles[i];
    Json e;
    e["p"] = vec_json(con.K.P);
    e["n"] = vec_json(con.K.N);
    e["m"] = con.K.m;
    e["a"] = con.K.a;
    e["d"] = con.K.d;
    e["alpha"] = con.alpha;
    e["disc_budgets"] = con.disc_budgets;
    e["chain_energy"] = bd.audits[i].total;
    e["unit_ball_energy"] = bd.unit_ball_per_chain[i];
    if (i < bd.ledgers.size())
      e["ledger"] =
          Json{{"lift", bd.ledgers[i].lift}, {"mod2", bd.ledgers[i].mod2}};
    dipoles.push_back(e);
  }
  m["dipoles"] = dipoles;
  m["domain"] = domain_json(bd.g_tilde.domain);
  m["files"] = Json{{"field", field_name}};
  return m;
}

Json cmd_insert_dipole(const Json& cfg, const fs::path& out, int threads,
                       bool verbose) {
  ensure_keys(cfg,
              {"field", "domain", "base", "p", "n", "m", "alpha", "eps_budget",
               "probe_radius", "with_ledger", "field_out", "n_core", "n_annulus",
               "n_theta", "n_rect", "n_remainder"},
              "insert-dipole");
  if (cfg.contains("field") == cfg.contains("domain"))
    fail(ErrorCode::FormatError,
         "insert-dipole needs exactly one of 'field' or 'domain'");

  Json resolved_domain;
  CosseratField base = [&]() {
    if (cfg.contains("field")) return load_field(need_str(cfg, "field"));
    const std::string base_kind = get_str(cfg, "base", "flip");
    if (base_kind != "flip")
      fail(ErrorCode::FormatError, "unsupported base field '" + base_kind + "'");
    return make_field(domain_from_json(cfg.at("domain"), resolved_domain), FlipBase{});
  }();

  const Vector3 P = need_vec3(cfg, "p");
  const Vector3 N = need_vec3(cfg, "n");
  const int m_cubes = need_int(cfg, "m");
  if (m_cubes < 2) fail(ErrorCode::InvalidArgument, "m must be at least 2");
  const double d = (N - P).norm();
  const double alpha = get_num(cfg, "alpha", d / (m_cubes - 1) / 8.0);
  DipoleOptions dop;
  dop.eps_budget = get_num(cfg, "eps_budget", dop.eps_budget);
  dop.n_core = get_int(cfg, "n_core", dop.n_core);
  dop.n_annulus = get_int(cfg, "n_annulus", dop.n_annulus);
  dop.n_theta = get_int(cfg, "n_theta", dop.n_theta);
  DipoleAuditOptions aop;
  aop.n_core = dop.n_core;
  aop.n_annulus = dop.n_annulus;
  aop.n_theta = dop.n_theta;
  aop.n_rect = get_int(cfg, "n_rect", aop.n_rect);
  aop.n_remainder = get_int(cfg, "n_remainder", aop.n_remainder);
  const double probe = get_num(cfg, "probe_radius", 2.0 * base.domain.h);
  const bool with_ledger = get_bool(cfg, "with_ledger", true);
  const std::string field_name = get_str(cfg, "field_out", "dipole.csrf");

  if (verbose)
    std::fprintf(stderr, "insert-dipole: d=%g m=%d alpha=%g\n", d, m_cubes, alpha);
  InsertDipoleResult res = insert_dipole(base, P, N, m_cubes, alpha, dop);
  save_field(res.field, (out / field_name).string());

  FieldInterpolator base_interp(base);
  DipoleAudit audit = audit_dipole_energy(res.construction, base_interp, aop);
  EnergyReport grid = energy(res.field, MaterialConstants{}, threads);
  std::vector<SingularPoint> sing = find_singularities(res.field, probe);

  Json m;
  m["config"] = Json{{"p", vec_json(P)},
                     {"n", vec_json(N)},
                     {"m", m_cubes},
                     {"alpha", alpha},
                     {"eps_budget", dop.eps_budget},
                     {"n_core", aop.n_core},
                     {"n_annulus", aop.n_annulus},
                     {"n_theta", aop.n_theta},
                     {"n_rect", aop.n_rect},
                     {"n_remainder", aop.n_remainder},
                     {"probe_radius", probe},
                     {"with_ledger", with_ledger},
                     {"field_out", field_name}};
  if (cfg.contains("field"))
    m["config"]["field"] = need_str(cfg, "field");
  else {
    m["config"]["domain"] = resolved_domain;
    m["config"]["base"] = "flip";
  }
  m["energy"] = audit.total;
  m["deformation"] = audit.deformation;
  m["curvature"] = audit.curvature;
  RegionEnergies sum;
  Json per_cube = Json::array();
  for (const RegionEnergies& r : audit.per_cube) {
    sum.ball += r.ball;
    sum.bottom_disc += r.bottom_disc;
    sum.top_disc += r.top_disc;
    sum.bottom_annulus += r.bottom_annulus;
    sum.top_annulus += r.top_annulus;
    sum.rest += r.rest;
    per_cube.push_back(regions_json(r));
  }
  m["regions"] = regions_json(sum);
  m["per_cube"] = per_cube;
  m["geometry"] = Json{{"d", res.construction.K.d},
                       {"a", res.construction.K.a},
                       {"m", res.construction.K.m},
                       {"alpha", res.construction.alpha}};
  m["disc_budgets"] = res.construction.disc_budgets;
  m["grid_energy"] = Json{{"total", grid.total},
                          {"deformation", grid.deformation},
                          {"curvature", grid.curvature}};
  m["singularities"] = singularities_json(sing);
  if (with_ledger) {
    DipoleDegreeLedger ledger = dipole_degree_ledger(res.construction, base_interp);
    m["ledger"] = Json{{"lift", ledger.lift}, {"mod2", ledger.mod2}};
  }
  m["domain"] = domain_json(res.field.domain);
  m["files"] = Json{{"field", field_name}};
  return m;
}

Json cmd_energy(const Json& cfg, int threads) {
  ensure_keys(cfg, {"field", "constants"}, "energy");
  CosseratField f = load_field(need_str(cfg, "field"));
  Json resolved_constants;
  MaterialConstants c = constants_from(cfg, resolved_constants);
  EnergyReport er = energy(f, c, threads);

  Json m;
  m["config"] = Json{{"field", need_str(cfg, "field")}, {"constants", resolved_constants}};
  m["energy"] = er.total;
  m["deformation"] = er.deformation;
  m["curvature"] = er.curvature;
  m["quadrature_nodes"] = er.nodes;
  m["domain"] = domain_json(f.domain);
  return m;
}

Json cmd_minimize(const Json& cfg, const fs::path& out, int threads, bool verbose) {
  ensure_keys(cfg,
              {"field", "field_out", "trace", "max_iters", "step_size", "step_rule",
               "bt_beta", "bt_c", "grad_tol", "energy_tol", "stall_window",
               "constants", "n_target", "epsilon", "disc_budget", "probe_radius",
               "slices"},
              "minimize");
  CosseratField f = load_field(need_str(cfg, "field"));

  SolverConfig sc;
  sc.threads = threads;
  sc.max_iters = get_int(cfg, "max_iters", sc.max_iters);
  sc.step_size = get_num(cfg, "step_size", sc.step_size);
  sc.bt_beta = get_num(cfg, "bt_beta", sc.bt_beta);
  sc.bt_c = get_num(cfg, "bt_c", sc.bt_c);
  sc.grad_tol = get_num(cfg, "grad_tol", sc.grad_tol);
  sc.energy_tol = get_num(cfg, "energy_tol", sc.energy_tol);
  sc.stall_window = get_int(cfg, "stall_window", sc.stall_window);
  const std::string rule = get_str(cfg, "step_rule", "backtracking");
  if (rule == "backtracking")
    sc.step_rule = StepRule::Backtracking;
  else if (rule == "fixed")
    sc.step_rule = StepRule::Fixed;
  else
    fail(ErrorCode::FormatError, "step_rule must be 'backtracking' or 'fixed'");
  Json resolved_constants;
  sc.constants = constants_from(cfg, resolved_constants);
  if (verbose) {
    sc.audit_every = 25;
    sc.audit = [](int iter, const CosseratField&) {
      std::fprintf(stderr, "minimize: iteration %d\n", iter);
    };
  }

  const std::string field_name = get_str(cfg, "field_out", "minimized.csrf");
  const std::string trace_name = get_str(cfg, "trace", "trace.csv");
  const std::string slices_name = get_str(cfg, "slices", "slices.json");

  MinimizeResult res = minimize_restricted(f, extract_dirichlet(f), sc);
  save_field(res.field, (out / field_name).string());
  write_trace_csv(out / trace_name, res.trace);

  EnergyReport fin = energy(res.field, sc.constants, threads);
  const double probe = get_num(cfg, "probe_radius", 2.0 * f.domain.h);
  std::vector<SingularPoint> sing = find_singularities(res.field, probe);

  Json m;
  m["config"] = Json{{"field", need_str(cfg, "field")},
                     {"field_out", field_name},
                     {"trace", trace_name},
                     {"max_iters", sc.max_iters},
                     {"step_size", sc.step_size},
                     {"step_rule", rule},
                     {"bt_beta", sc.bt_beta},
                     {"bt_c", sc.bt_c},
                     {"grad_tol", sc.grad_tol},
                     {"energy_tol", sc.energy_tol},
                     {"stall_window", sc.stall_window},
                     {"probe_radius", probe},
                     {"constants", resolved_constants}};
  m["initial_energy"] = res.initial_energy;
  m["final_energy"] = res.final_energy;
  m["deformation"] = fin.deformation;
  m["curvature"] = fin.curvature;
  m["iterations"] = res.iterations;
  m["stop_reason"] = stop_reason_name(res.reason);
  m["singularities"] = singularities_json(sing);
  m["files"] = Json{{"field", field_name}, {"trace", trace_name}};
  if (cfg.contains("n_target")) {
    m["config"]["n_target"] = need_int(cfg, "n_target");
    m["config"]["epsilon"] = need_num(cfg, "epsilon");
    m["config"]["slices"] = slices_name;
    slice_section(res.field, cfg, m, out, slices_name, sc.constants);
  }
  return m;
}

Json cmd_analyze(const Json& cfg, const fs::path& out, bool verbose) {
  ensure_keys(cfg,
              {"field", "probe_radius", "flag_angle_deg", "sphere_degree",
               "verify_dipole", "n_target", "epsilon", "disc_budget", "constants",
               "slices"},
              "analyze");
  CosseratField f = load_field(need_str(cfg, "field"));
  const double probe = get_num(cfg, "probe_radius", 2.0 * f.domain.h);
  SingularityOptions sopt;
  sopt.flag_angle_deg = get_num(cfg, "flag_angle_deg", sopt.flag_angle_deg);

  if (verbose) std::fprintf(stderr, "analyze: probe radius %g\n", probe);
  std::vector<SingularPoint> sing = find_singularities(f, probe, sopt);

  Json m;
  m["config"] = Json{{"field", need_str(cfg, "field")},
                     {"probe_radius", probe},
                     {"flag_angle_deg", sopt.flag_angle_deg}};
  m["singularities"] = singularities_json(sing);
  m["count"] = sing.size();
  m["domain"] = domain_json(f.domain);
  m["files"] = Json::object();

  const bool want_sphere =
      get_bool(cfg, "sphere_degree", f.domain.shape == ShapeTag::Ball);
  m["config"]["sphere_degree"] = want_sphere;
  if (want_sphere) {
    if (f.domain.shape != ShapeTag::Ball)
      fail(ErrorCode::InvalidArgument, "sphere_degree needs a ball domain");
    FieldInterpolator interp(f);
    DegreeResult dr = surface_degree(
        star_sphere(f.domain.center, f.domain.radius),
        [&interp](const Vector3& x) { return interp.director(x); });
    m["surface"] = Json{{"degree", dr.degree},
                        {"mod2", dr.mod2},
                        {"residual", dr.residual},
                        {"radius", f.domain.radius}};
  }

  if (cfg.contains("verify_dipole")) {
    const Json& vd = cfg.at("verify_dipole");
    ensure_keys(vd, {"p", "n", "cylinder_radius"}, "verify_dipole");
    const Vector3 P = need_vec3(vd, "p");
    const Vector3 N = need_vec3(vd, "n");
    const double radius = need_num(vd, "cylinder_radius");
    DipoleRecord rec = verify_dipole(f, P, N, radius, sopt);
    m["config"]["verify_dipole"] = Json{{"p", vec_json(P)},
                                        {"n", vec_json(N)},
                                        {"cylinder_radius", radius}};
    m["dipole"] = Json{{"p", vec_json(rec.P)},
                       {"n", vec_json(rec.N)},
                       {"cylinder_radius", rec.cylinder_radius},
                       {"probe_radius", rec.probe_radius},
                       {"geometry_ok", rec.geometry_ok},
                       {"interior_clean", rec.interior_clean},
                       {"endpoint_mod2_ok", rec.endpoint_mod2_ok},
                       {"degrees_opposite", rec.degrees_opposite},
                       {"lift_degree_p", rec.lift_degree_P},
                       {"lift_degree_n", rec.lift_degree_N},
                       {"verified", rec.verified}};
  }

  if (cfg.contains("n_target")) {
    Json resolved_constants;
    MaterialConstants c = constants_from(cfg, resolved_constants);
    const std::string slices_name = get_str(cfg, "slices", "slices.json");
    m["config"]["n_target"] = need_int(cfg, "n_target");
    m["config"]["epsilon"] = need_num(cfg, "epsilon");
    m["config"]["slices"] = slices_name;
    m["config"]["constants"] = resolved_constants;
    slice_section(f, cfg, m, out, slices_name, c);
  }
  return m;
}

Json cmd_export(const Json& cfg, const fs::path& out) {
  ensure_keys(cfg, {"field", "vtk"}, "export");
  CosseratField f = load_field(need_str(cfg, "field"));
  const std::string vtk_name = get_str(cfg, "vtk", "field.vtk");
  export_vtk(f, (out / vtk_name).string());

  Json m;
  m["config"] = Json{{"field", need_str(cfg, "field")}, {"vtk", vtk_name}};
  m["domain"] = domain_json(f.domain);
  m["nodes"] = f.domain.size();
  m["files"] = Json{{"vtk", vtk_name}};
  return m;
}

}  // namespace

Json run_command(const std::string& command, const Json& config,
                 const std::string& out_dir, int threads, bool verbose) {
  if (threads < 0) fail(ErrorCode::InvalidArgument, "threads must be nonnegative");
  if (threads == 0) threads = 1;
  const fs::path out = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) fail(ErrorCode::Internal, "cannot create output directory '" + out.string() + "'");

  Json manifest;
  if (command == "build-boundary")
    manifest = cmd_build_boundary(config, out, verbose);
  else if (command == "insert-dipole")
    manifest = cmd_insert_dipole(config, out, threads, verbose);
  else if (command == "energy")
    manifest = cmd_energy(config, threads);
  else if (command == "minimize")
    manifest = cmd_minimize(config, out, threads, verbose);
  else if (command == "analyze")
    manifest = cmd_analyze(config, out, verbose);
  else if (command == "export")
    manifest = cmd_export(config, out);
  else
    fail(ErrorCode::InvalidArgument, "unknown command '" + command + "'");

  manifest["command"] = command;
  write_text(out / ("manifest-" + command + ".json"), manifest.dump(2) + "\n");
  return manifest;
}

}  // namespace cosserat
