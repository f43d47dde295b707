#include "ssfm/ssfm.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "ssfm/config.hpp"
#include "ssfm/experiments.hpp"
#include "ssfm/random.hpp"

using nlohmann::json;

struct ssfm_config {
  json doc;
  ssfm::RunConfig cfg;
};

struct ssfm_field {
  ssfm::SpectralField field;
};

namespace {

thread_local std::string g_last_error;

ssfm_status fail(ssfm_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

template <class F>
ssfm_status guarded(F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const ssfm::ConfigError& e) {
    return fail(SSFM_CONFIG_ERROR, e.what());
  } catch (const json::exception& e) {
    return fail(SSFM_CONFIG_ERROR, e.what());
  } catch (const ssfm::IoError& e) {
    return fail(SSFM_IO_ERROR, e.what());
  } catch (const ssfm::StabilityError& e) {
    return fail(SSFM_NUMERICAL_ERROR, e.what());
  } catch (const ssfm::TransformError& e) {
    return fail(SSFM_NUMERICAL_ERROR, e.what());
  } catch (const ssfm::MassDeficitError& e) {
    return fail(SSFM_CONFIG_ERROR, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SSFM_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SSFM_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(SSFM_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(SSFM_INTERNAL_ERROR, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

ssfm_status status_of(ssfm::ExitStatus s) { return static_cast<ssfm_status>(s); }

#define SSFM_REQUIRE(cond, msg) \
  if (!(cond)) return fail(SSFM_INVALID_ARGUMENT, msg)

}  // namespace

extern "C" {

const char* ssfm_version(void) { return ssfm::version().data(); }

const char* ssfm_last_error(void) { return g_last_error.c_str(); }

void ssfm_string_free(char* s) { std::free(s); }

ssfm_status ssfm_config_parse(const char* text, ssfm_config** out) {
  return guarded([&] {
    SSFM_REQUIRE(text && out, "null argument");
    json doc = json::parse(text);
    if (doc.is_null()) doc = json::object();
    ssfm::RunConfig cfg = ssfm::config_from_json(doc);
    *out = new ssfm_config{std::move(doc), std::move(cfg)};
    return SSFM_OK;
  });
}

ssfm_status ssfm_config_preset(const char* name, ssfm_config** out) {
  return guarded([&] {
    SSFM_REQUIRE(name && out, "null argument");
    ssfm::RunConfig cfg = ssfm::preset(name);
    json doc = ssfm::config_to_json(cfg);
    *out = new ssfm_config{std::move(doc), std::move(cfg)};
    return SSFM_OK;
  });
}

ssfm_status ssfm_config_merge(ssfm_config* c, const char* overrides) {
  return guarded([&] {
    SSFM_REQUIRE(c && overrides, "null argument");
    json merged = ssfm::merge_config_json(c->doc, json::parse(overrides));
    ssfm::RunConfig cfg = ssfm::config_from_json(merged);
    c->doc = std::move(merged);
    c->cfg = std::move(cfg);
    return SSFM_OK;
  });
}

ssfm_status ssfm_config_to_json(const ssfm_config* c, char** out) {
  return guarded([&] {
    SSFM_REQUIRE(c && out, "null argument");
    *out = dup_string(ssfm::config_to_json(c->cfg).dump(2));
    return SSFM_OK;
  });
}

void ssfm_config_free(ssfm_config* c) { delete c; }

ssfm_status ssfm_field_from_coeffs(int K, int d, const double* coeffs, size_t n,
                                   ssfm_field** out) {
  return guarded([&] {
    SSFM_REQUIRE(coeffs && out, "null argument");
    ssfm::Grid g(K, d);
    SSFM_REQUIRE(n == g.size(), "coefficient count must be (2K)^d");
    std::vector<ssfm::cplx> c(n);
    for (size_t i = 0; i < n; ++i) c[i] = {coeffs[2 * i], coeffs[2 * i + 1]};
    *out = new ssfm_field{ssfm::SpectralField(g, std::move(c))};
    return SSFM_OK;
  });
}

ssfm_status ssfm_field_plane_wave(int K, int d, const int* ell, double rho, ssfm_field** out) {
  return guarded([&] {
    SSFM_REQUIRE(ell && out, "null argument");
    ssfm::Grid g(K, d);
    ssfm::PlaneWaveSpec w;
    w.rho = rho;
    w.ell.assign(ell, ell + d);
    SSFM_REQUIRE(g.contains(w.ell), "ell outside grid");
    *out = new ssfm_field{ssfm::plane_wave(g, w)};
    return SSFM_OK;
  });
}

ssfm_status ssfm_field_random(const ssfm_config* c, ssfm_field** out) {
  return guarded([&] {
    SSFM_REQUIRE(c && out, "null argument");
    ssfm::DatumSpec ds;
    ds.grid = ssfm::Grid(c->cfg.K, c->cfg.d);
    ds.rho = c->cfg.rho();
    ds.ell = c->cfg.ell;
    ds.s = c->cfg.s;
    ds.epsilon = c->cfg.epsilon;
    ds.seed = c->cfg.seed;
    *out = new ssfm_field{ssfm::random_initial_datum(ds)};
    return SSFM_OK;
  });
}

size_t ssfm_field_size(const ssfm_field* f) { return f ? f->field.grid().size() : 0; }

ssfm_status ssfm_field_coeffs(const ssfm_field* f, double* dst, size_t n_doubles) {
  return guarded([&] {
    SSFM_REQUIRE(f && dst, "null argument");
    const auto c = f->field.coeffs();
    SSFM_REQUIRE(n_doubles >= 2 * c.size(), "destination too small");
    for (size_t i = 0; i < c.size(); ++i) {
      dst[2 * i] = c[i].real();
      dst[2 * i + 1] = c[i].imag();
    }
    return SSFM_OK;
  });
}

ssfm_status ssfm_field_sobolev_norm(const ssfm_field* f, double s, double* out) {
  return guarded([&] {
    SSFM_REQUIRE(f && out, "null argument");
    SSFM_REQUIRE(s >= 0.0, "s must be >= 0");
    *out = ssfm::sobolev_norm(f->field, s);
    return SSFM_OK;
  });
}

ssfm_status ssfm_field_orbital_distance(const ssfm_field* f, const int* ell, double s,
                                        double* out) {
  return guarded([&] {
    SSFM_REQUIRE(f && ell && out, "null argument");
    SSFM_REQUIRE(s >= 0.0, "s must be >= 0");
    const ssfm::Grid& g = f->field.grid();
    const ssfm::Mode l(ell, ell + g.d());
    SSFM_REQUIRE(g.contains(l), "ell outside grid");
    *out = ssfm::orbital_distance(f->field.coeffs(), g, l, s);
    return SSFM_OK;
  });
}

void ssfm_field_free(ssfm_field* f) { delete f; }

ssfm_status ssfm_integrate(ssfm_field* f, ssfm_scheme scheme, double h, int lambda,
                           uint64_t n_steps) {
  return guarded([&] {
    SSFM_REQUIRE(f, "null argument");
    SSFM_REQUIRE(scheme >= SSFM_LIE_TROTTER && scheme <= SSFM_STRANG_NONLINEAR_OUTSIDE,
                 "unknown scheme");
    const ssfm::StepScheme st{static_cast<ssfm::Scheme>(scheme), h};
    ssfm::IntegrationResult r = ssfm::integrate(f->field, st, lambda, n_steps);
    f->field = std::move(r.final_state);
    if (r.non_finite) return fail(SSFM_BLOWUP, "non-finite state after " +
                                                   std::to_string(r.steps_done) + " steps");
    return SSFM_OK;
  });
}

ssfm_status ssfm_cfl_max_h(int d, int K, double rho0, int N, double* out) {
  return guarded([&] {
    SSFM_REQUIRE(out, "null argument");
    *out = ssfm::cfl_max_h(d, K, rho0, N);
    return SSFM_OK;
  });
}

ssfm_status ssfm_check(const ssfm_config* c, char** report) {
  return guarded([&] {
    SSFM_REQUIRE(c && report, "null argument");
    ssfm::CheckOutcome o = ssfm::run_check(c->cfg);
    *report = dup_string(o.report.dump(2));
    return status_of(o.status);
  });
}

ssfm_status ssfm_simulate(const ssfm_config* c, char** summary) {
  return guarded([&] {
    SSFM_REQUIRE(c && summary, "null argument");
    ssfm::SimulateOutcome o = ssfm::run_simulate(c->cfg);
    *summary = dup_string(o.summary.dump(2));
    if (o.status == ssfm::ExitStatus::BlowUp)
      return fail(SSFM_BLOWUP, "non-finite state; partial diagnostics written");
    return status_of(o.status);
  });
}

ssfm_status ssfm_sweep(const ssfm_config* c, unsigned threads, char** csv, char** rows) {
  return guarded([&] {
    SSFM_REQUIRE(c, "null argument");
    ssfm::SweepOutcome o = ssfm::run_sweep(c->cfg, threads);
    if (csv) *csv = dup_string(o.csv);
    if (rows) *rows = dup_string(o.rows.dump(2));
    return SSFM_OK;
  });
}

}  // extern "C"
