// Command-line front end. Links only against the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cosserat/cosserat_c.h"

namespace {

int run(const std::string& command, const std::string& config_path,
        const std::string& out_dir, int threads, bool verbose) {
  std::string config = "{}";
  if (!config_path.empty()) {
    std::ifstream is(config_path);
    if (!is) {
      std::fprintf(stderr, "error: cannot read config file '%s'\n", config_path.c_str());
      return 2;
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    config = ss.str();
  }
  char* manifest = nullptr;
  int rc = csr_run_command(command.c_str(), config.c_str(), out_dir.c_str(), threads,
                           verbose ? 1 : 0, &manifest);
  if (rc != CSR_OK) {
    nlohmann::json err{{"error", {{"name", csr_last_error_name()},
                                  {"message", csr_last_error()}}}};
    std::fputs(err.dump(2).c_str(), stdout);
    std::fputc('\n', stdout);
    std::fprintf(stderr, "error [%s]: %s\n", csr_last_error_name(), csr_last_error());
    return rc == CSR_ERR_INVALID ? 2 : 1;
  }
  if (manifest) {
    std::fputs(manifest, stdout);
    std::fputc('\n', stdout);
    csr_string_free(manifest);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cosserat dipole constructions, energy audits, and minimization"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int threads = 0;
  bool verbose = false;
  if (const char* env = std::getenv("COSSERAT_THREADS")) threads = std::atoi(env);

  app.add_option("--config", config_path, "JSON configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (created if missing)");
  app.add_option("--threads", threads, "worker threads (default: COSSERAT_THREADS or 1)");
  app.add_flag("--verbose", verbose, "progress notes on stderr");

  static const struct {
    const char* name;
    const char* help;
  } kCommands[] = {
      {"build-boundary", "construct the dipole boundary data on the unit ball"},
      {"insert-dipole", "insert one dipole construction into a field"},
      {"energy", "energy report for a stored field"},
      {"minimize", "projected gradient descent under fixed boundary values"},
      {"analyze", "singularity / degree / slice diagnostics"},
      {"export", "convert a stored field to legacy VTK"},
  };
  for (const auto& c : kCommands) app.add_subcommand(c.name, c.help)->fallthrough();

  CLI11_PARSE(app, argc, argv);

  for (auto* sub : app.get_subcommands())
    return run(sub->get_name(), config_path, out_dir, threads, verbose);
  return 2;
}
