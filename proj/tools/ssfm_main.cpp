// ssfm: command-line driver for the split-step Fourier toolkit.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssfm/ssfm.h"

using nlohmann::json;

namespace {

struct Flags {
  std::string config;
  std::optional<double> h, rho2, horizon, s, epsilon, c2, delta2, s2, s2_per_N, eps_hat;
  std::optional<int> K, d, lambda, N;
  std::optional<std::vector<int>> ell;
  std::optional<std::string> scheme, out, runid;
  std::optional<std::uint64_t> steps, seed, cadence;
  bool exhaustive = false;
  unsigned threads = 0;
};

void add_common(CLI::App* app, Flags& f) {
  app->set_help_flag("--help", "print this help and exit");
  app->add_option("--config", f.config, "JSON configuration file");
  app->add_option("--h", f.h, "time step");
  app->add_option("--rho2", f.rho2, "squared L2 norm of the plane wave");
  app->add_option("--K", f.K, "modes per axis half-width");
  app->add_option("--d", f.d, "spatial dimension");
  app->add_option("--ell", f.ell, "carrier mode (d integers)")->expected(1, 16);
  app->add_option("--lambda", f.lambda, "+1 defocusing, -1 focusing");
  app->add_option("--scheme", f.scheme,
                  "lie-trotter | strang-linear-outside | strang-nonlinear-outside");
  app->add_option("--steps", f.steps, "number of steps");
  app->add_option("--horizon", f.horizon, "final time T (steps = round(T/h))");
  app->add_option("--s", f.s, "Sobolev exponent");
  app->add_option("--epsilon", f.epsilon, "size of the perturbation in H^s");
  app->add_option("--seed", f.seed, "seed of the random datum");
  app->add_option("--N", f.N, "order of the non-resonance check");
  app->add_option("--c2", f.c2, "non-resonance constant c2");
  app->add_option("--delta2", f.delta2, "small-divisor threshold delta2");
  app->add_option("--s2", f.s2, "absolute s2");
  app->add_option("--s2-per-N", f.s2_per_N, "s2 = value * N");
  app->add_option("--eps-hat", f.eps_hat, "0: use omega; > 0: modified frequencies");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--runid", f.runid, "file name stem of the outputs");
  app->add_option("--cadence", f.cadence, "sample every n steps (0 = automatic)");
  app->add_flag("--exhaustive", f.exhaustive, "collect every resonance witness");
}

json overrides(const Flags& f) {
  json o = json::object();
  auto put = [&](const char* k, const auto& v) {
    if (v) o[k] = *v;
  };
  put("h", f.h);
  put("rho2", f.rho2);
  put("K", f.K);
  put("d", f.d);
  put("ell", f.ell);
  put("lambda", f.lambda);
  put("scheme", f.scheme);
  put("steps", f.steps);
  put("horizon", f.horizon);
  put("s", f.s);
  put("epsilon", f.epsilon);
  put("seed", f.seed);
  put("N", f.N);
  put("c2", f.c2);
  put("delta2", f.delta2);
  put("s2", f.s2);
  put("s2_per_N", f.s2_per_N);
  put("eps_hat", f.eps_hat);
  put("out", f.out);
  put("runid", f.runid);
  put("cadence", f.cadence);
  if (f.exhaustive) o["exhaustive"] = true;
  if (f.d && !f.ell) o["ell"] = std::vector<int>(static_cast<std::size_t>(*f.d), 0);
  return o;
}

void report_error(const char* what) {
  std::cerr << "ssfm: " << what << ": " << ssfm_last_error() << '\n';
}

// Builds the configuration from the preset (if any), the file and the flags.
ssfm_config* load_config(const Flags& f, const char* preset, int& exit_code) {
  ssfm_config* cfg = nullptr;
  ssfm_status st;
  if (preset) {
    st = ssfm_config_preset(preset, &cfg);
  } else if (!f.config.empty()) {
    std::ifstream is(f.config);
    if (!is) {
      std::cerr << "ssfm: cannot read " << f.config << '\n';
      exit_code = SSFM_CONFIG_ERROR;
      return nullptr;
    }
    std::stringstream ss;
    ss << is.rdbuf();
    st = ssfm_config_parse(ss.str().c_str(), &cfg);
  } else {
    st = ssfm_config_parse("{}", &cfg);
  }
  if (st == SSFM_OK) {
    if (preset && !f.config.empty()) {
      std::ifstream is(f.config);
      std::stringstream ss;
      ss << is.rdbuf();
      st = is ? ssfm_config_merge(cfg, ss.str().c_str()) : SSFM_CONFIG_ERROR;
    }
    if (st == SSFM_OK) st = ssfm_config_merge(cfg, overrides(f).dump().c_str());
  }
  if (st != SSFM_OK) {
    report_error("configuration");
    ssfm_config_free(cfg);
    exit_code = SSFM_CONFIG_ERROR;
    return nullptr;
  }
  return cfg;
}

int exit_code_of(ssfm_status st) {
  switch (st) {
    case SSFM_OK:
    case SSFM_ASSUMPTION_FAILED:
    case SSFM_CONFIG_ERROR:
    case SSFM_BLOWUP:
      return st;
    case SSFM_INVALID_ARGUMENT:
      return SSFM_CONFIG_ERROR;
    default:
      return 4;
  }
}

void print_and_free(char* s) {
  if (!s) return;
  std::cout << s << '\n';
  ssfm_string_free(s);
}

std::string field(const json& cfg, const char* key) {
  return cfg.contains(key) ? cfg[key].get<std::string>() : std::string();
}

bool write_text(const std::string& path, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(std::filesystem::path(path).parent_path(), ec);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  os << text;
  return static_cast<bool>(os);
}

int cmd_check(const Flags& f, const char* preset = nullptr) {
  int code = 0;
  ssfm_config* cfg = load_config(f, preset, code);
  if (!cfg) return code;
  char* report = nullptr;
  const ssfm_status st = ssfm_check(cfg, &report);
  if (st != SSFM_OK && st != SSFM_ASSUMPTION_FAILED) report_error("check");
  print_and_free(report);
  ssfm_config_free(cfg);
  return exit_code_of(st);
}

int cmd_simulate(const Flags& f, const char* preset = nullptr) {
  int code = 0;
  ssfm_config* cfg = load_config(f, preset, code);
  if (!cfg) return code;
  char* summary = nullptr;
  const ssfm_status st = ssfm_simulate(cfg, &summary);
  if (st != SSFM_OK) report_error("simulate");
  print_and_free(summary);
  ssfm_config_free(cfg);
  return exit_code_of(st);
}

int cmd_sweep(const Flags& f, const std::vector<double>& hs, const std::vector<double>& r2s,
              std::uint64_t sim_steps) {
  int code = 0;
  ssfm_config* cfg = load_config(f, nullptr, code);
  if (!cfg) return code;
  json sweep = json::object();
  if (!hs.empty()) sweep["h"] = hs;
  if (!r2s.empty()) sweep["rho2"] = r2s;
  if (sim_steps) sweep["simulate_steps"] = sim_steps;
  ssfm_status st = SSFM_OK;
  if (!sweep.empty()) st = ssfm_config_merge(cfg, json{{"sweep", sweep}}.dump().c_str());
  if (st != SSFM_OK) {
    report_error("configuration");
    ssfm_config_free(cfg);
    return SSFM_CONFIG_ERROR;
  }
  char* csv = nullptr;
  char* rows = nullptr;
  st = ssfm_sweep(cfg, f.threads, &csv, &rows);
  if (st != SSFM_OK) {
    report_error("sweep");
  } else {
    char* cj = nullptr;
    ssfm_config_to_json(cfg, &cj);
    const json c = json::parse(cj);
    ssfm_string_free(cj);
    const std::string stem = field(c, "out") + "/" + field(c, "runid") + "_sweep";
    if (!write_text(stem + ".csv", csv) || !write_text(stem + ".json", rows)) {
      std::cerr << "ssfm: cannot write " << stem << ".{csv,json}\n";
      st = SSFM_IO_ERROR;
    }
    std::cout << csv;
  }
  ssfm_string_free(csv);
  ssfm_string_free(rows);
  ssfm_config_free(cfg);
  return exit_code_of(st);
}

int cmd_figures(const Flags& f, const std::string& which) {
  std::vector<std::string> names;
  if (which == "all") names = {"fig1", "fig2", "fig3"};
  else names = {which};
  int worst = 0;
  for (const auto& name : names) {
    int code = 0;
    ssfm_config* cfg = load_config(f, name.c_str(), code);
    if (!cfg) return code;
    char* report = nullptr;
    ssfm_status st = ssfm_check(cfg, &report);
    char* cj = nullptr;
    ssfm_config_to_json(cfg, &cj);
    const json c = json::parse(cj);
    ssfm_string_free(cj);
    if (report) {
      const std::string path = field(c, "out") + "/" + field(c, "runid") + "_check.json";
      if (!write_text(path, report)) std::cerr << "ssfm: cannot write " << path << '\n';
      ssfm_string_free(report);
    } else if (st != SSFM_ASSUMPTION_FAILED) {
      report_error("check");
    }
    char* summary = nullptr;
    st = ssfm_simulate(cfg, &summary);
    if (st != SSFM_OK) report_error(name.c_str());
    print_and_free(summary);
    ssfm_config_free(cfg);
    worst = std::max(worst, exit_code_of(st));
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split-step Fourier method for the cubic NLS: plane-wave stability toolkit"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ssfm_version()));

  Flags f;
  auto* check = app.add_subcommand("check", "check linear stability, non-resonance and CFL");
  add_common(check, f);
  auto* simulate = app.add_subcommand("simulate", "integrate a random datum and emit diagnostics");
  add_common(simulate, f);

  auto* sweep = app.add_subcommand("sweep", "assumption checks over a grid of (h, rho2)");
  add_common(sweep, f);
  std::vector<double> hs, r2s;
  std::uint64_t sim_steps = 0;
  sweep->add_option("--sweep-h", hs, "h values");
  sweep->add_option("--sweep-rho2", r2s, "rho2 values");
  sweep->add_option("--simulate-steps", sim_steps, "short simulation per point");
  sweep->add_option("--threads", f.threads, "worker threads (0 = all cores)");

  auto* figures = app.add_subcommand("figures", "run the fig1/fig2/fig3 experiments");
  add_common(figures, f);
  std::string which = "all";
  figures->add_option("which", which, "fig1 | fig2 | fig3 | all")
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : SSFM_CONFIG_ERROR;
  }

  if (*check) return cmd_check(f);
  if (*simulate) return cmd_simulate(f);
  if (*sweep) return cmd_sweep(f, hs, r2s, sim_steps);
  if (*figures) return cmd_figures(f, which);
  return SSFM_CONFIG_ERROR;
}
