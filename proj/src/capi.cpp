#include "cosserat/cosserat_c.h"

#include <cstring>
#include <exception>
#include <string>

#include "cosserat/commands.hpp"
#include "cosserat/energy.hpp"
#include "cosserat/errors.hpp"
#include "cosserat/io.hpp"

using cosserat::CosseratField;
using cosserat::Error;

struct csr_field {
  CosseratField f;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_error_name;

int set_error(const Error& e) {
  g_last_error = e.what();
  g_last_error_name = cosserat::error_code_name(e.code());
  return CSR_ERR_INVALID;
}

int set_internal(const std::exception& e) {
  g_last_error = e.what();
  g_last_error_name = "Internal";
  return CSR_ERR_INTERNAL;
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return CSR_OK;
  } catch (const Error& e) {
    return set_error(e);
  } catch (const std::exception& e) {
    return set_internal(e);
  } catch (...) {
    g_last_error = "unknown failure";
    g_last_error_name = "Internal";
    return CSR_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* csr_version(void) { return "1.0.0"; }

const char* csr_last_error(void) { return g_last_error.c_str(); }
const char* csr_last_error_name(void) { return g_last_error_name.c_str(); }

int csr_field_load(const char* path, csr_field** out) {
  if (!path || !out) {
    g_last_error = "null argument";
    g_last_error_name = "InvalidArgument";
    return CSR_ERR_INVALID;
  }
  *out = nullptr;
  return guarded([&]() {
    auto* h = new csr_field{cosserat::load_field(path)};
    *out = h;
  });
}

int csr_field_save(const csr_field* f, const char* path) {
  if (!f || !path) {
    g_last_error = "null argument";
    g_last_error_name = "InvalidArgument";
    return CSR_ERR_INVALID;
  }
  return guarded([&]() { cosserat::save_field(f->f, path); });
}

void csr_field_free(csr_field* f) { delete f; }

int csr_field_dims(const csr_field* f, unsigned* nx, unsigned* ny, unsigned* nz) {
  if (!f || !nx || !ny || !nz) {
    g_last_error = "null argument";
    g_last_error_name = "InvalidArgument";
    return CSR_ERR_INVALID;
  }
  *nx = static_cast<unsigned>(f->f.domain.nx);
  *ny = static_cast<unsigned>(f->f.domain.ny);
  *nz = static_cast<unsigned>(f->f.domain.nz);
  return CSR_OK;
}

int csr_field_spacing(const csr_field* f, double* h) {
  if (!f || !h) {
    g_last_error = "null argument";
    g_last_error_name = "InvalidArgument";
    return CSR_ERR_INVALID;
  }
  *h = f->f.domain.h;
  return CSR_OK;
}

int csr_field_energy(const csr_field* f, double mu1, double muc, double mu2,
                     double lambda, double p, int threads, double* deformation,
                     double* curvature) {
  if (!f || !deformation || !curvature) {
    g_last_error = "null argument";
    g_last_error_name = "InvalidArgument";
    return CSR_ERR_INVALID;
  }
  return guarded([&]() {
    cosserat::MaterialConstants c{mu1, muc, mu2, lambda, p};
    auto rep = cosserat::energy(f->f, c, threads);
    *deformation = rep.deformation;
    *curvature = rep.curvature;
  });
}

int csr_run_command(const char* command, const char* config_json, const char* out_dir,
                    int threads, int verbose, char** manifest_json_out) {
  if (!command || !config_json || !out_dir) {
    g_last_error = "null argument";
    g_last_error_name = "InvalidArgument";
    return CSR_ERR_INVALID;
  }
  if (manifest_json_out) *manifest_json_out = nullptr;
  return guarded([&]() {
    cosserat::Json cfg;
    try {
      cfg = cosserat::Json::parse(config_json);
    } catch (const std::exception& e) {
      cosserat::fail(cosserat::ErrorCode::FormatError,
                     std::string("config is not valid JSON: ") + e.what());
    }
    cosserat::Json manifest =
        cosserat::run_command(command, cfg, out_dir, threads, verbose != 0);
    if (manifest_json_out) {
      std::string text = manifest.dump(2);
      char* buf = new char[text.size() + 1];
      std::memcpy(buf, text.c_str(), text.size() + 1);
      *manifest_json_out = buf;
    }
  });
}

void csr_string_free(char* s) { delete[] s; }

}  // extern "C"
