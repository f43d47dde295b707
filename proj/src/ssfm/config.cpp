#include "ssfm/config.hpp"

#include <cmath>
#include <set>

#include "ssfm/spectral_field.hpp"

namespace ssfm {

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "d",        "K",         "ell",          "lambda",     "rho",      "rho2",
      "h",        "scheme",    "steps",        "horizon",    "s",        "epsilon",
      "seed",     "N",         "c2",           "delta2",     "s2",       "s2_per_N",
      "eps_hat",  "exhaustive", "out",         "runid",      "cadence",  "threshold_factor",
      "windows",  "sweep"};
  return keys;
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

std::uint64_t get_count(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::uint64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && std::floor(d) == d && d < 1.8e19) return static_cast<std::uint64_t>(d);
  }
  throw ConfigError(std::string("config key '") + key + "' must be a nonnegative integer");
}

SweepAxis parse_axis(const json& j, const char* name) {
  SweepAxis a;
  if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number()) throw ConfigError(std::string("sweep.") + name + ": non-numeric value");
      a.values.push_back(v.get<double>());
    }
    return a;
  }
  if (!j.is_object()) throw ConfigError(std::string("sweep.") + name + ": expected array or object");
  const double from = get<double>(j, "from");
  const double to = get<double>(j, "to");
  const std::uint64_t count = get_count(j, "count");
  for (std::uint64_t i = 0; i < count; ++i)
    a.values.push_back(count == 1 ? from
                                  : from + (to - from) * static_cast<double>(i) /
                                               static_cast<double>(count - 1));
  return a;
}

}  // namespace

double RunConfig::rho() const { return std::sqrt(rho2); }

double RunConfig::horizon_time() const { return static_cast<double>(n_steps) * h; }

double RunConfig::s2_for(int n) const { return s2 ? *s2 : s2_per_N * n; }

std::uint64_t RunConfig::effective_cadence() const {
  return cadence > 0 ? cadence : default_cadence(n_steps);
}

std::vector<std::pair<double, double>> RunConfig::effective_windows() const {
  if (!windows.empty()) return windows;
  const double T = horizon_time();
  return {{0.0, 200.0}, {T - 200.0, T}};
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!known_keys().count(k)) throw ConfigError("unknown config key '" + k + "'");

  RunConfig c;
  if (j.contains("d")) c.d = get<int>(j, "d");
  if (j.contains("K")) c.K = get<int>(j, "K");
  if (j.contains("ell")) {
    const json& e = j.at("ell");
    if (e.is_number_integer()) c.ell = Mode{e.get<int>()};
    else c.ell = get<std::vector<int>>(j, "ell");
  } else {
    c.ell.assign(static_cast<std::size_t>(std::max(c.d, 1)), 0);
  }
  if (j.contains("lambda")) c.lambda = get<int>(j, "lambda");
  if (j.contains("rho") && j.contains("rho2")) throw ConfigError("give rho or rho2, not both");
  if (j.contains("rho")) {
    const double r = get<double>(j, "rho");
    if (r < 0.0) throw ConfigError("rho must be >= 0");
    c.rho2 = r * r;
  }
  if (j.contains("rho2")) c.rho2 = get<double>(j, "rho2");
  if (j.contains("h")) c.h = get<double>(j, "h");
  if (j.contains("scheme")) {
    const auto name = get<std::string>(j, "scheme");
    const auto s = parse_scheme(name);
    if (!s) throw ConfigError("unknown scheme '" + name + "'");
    c.scheme = *s;
  }
  if (j.contains("steps") && j.contains("horizon"))
    throw ConfigError("give steps or horizon, not both");
  if (j.contains("steps")) c.n_steps = get_count(j, "steps");
  if (j.contains("horizon")) c.horizon = get<double>(j, "horizon");
  if (j.contains("s")) c.s = get<double>(j, "s");
  if (j.contains("epsilon")) c.epsilon = get<double>(j, "epsilon");
  if (j.contains("seed")) c.seed = get_count(j, "seed");
  if (j.contains("N")) c.N = get<int>(j, "N");
  if (j.contains("c2")) c.c2 = get<double>(j, "c2");
  if (j.contains("delta2")) c.delta2 = get<double>(j, "delta2");
  if (j.contains("s2") && !j.at("s2").is_null()) c.s2 = get<double>(j, "s2");
  if (j.contains("s2_per_N")) c.s2_per_N = get<double>(j, "s2_per_N");
  if (j.contains("eps_hat")) c.eps_hat = get<double>(j, "eps_hat");
  if (j.contains("exhaustive")) c.exhaustive = get<bool>(j, "exhaustive");
  if (j.contains("out")) c.out = get<std::string>(j, "out");
  if (j.contains("runid")) c.runid = get<std::string>(j, "runid");
  if (j.contains("cadence")) c.cadence = get_count(j, "cadence");
  if (j.contains("threshold_factor")) c.threshold_factor = get<double>(j, "threshold_factor");
  if (j.contains("windows")) {
    for (const auto& w : j.at("windows")) {
      if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number())
        throw ConfigError("windows: expected [[t0, t1], ...]");
      c.windows.emplace_back(w[0].get<double>(), w[1].get<double>());
    }
  }
  if (j.contains("sweep")) {
    const json& sw = j.at("sweep");
    if (!sw.is_object()) throw ConfigError("sweep must be an object");
    for (const auto& [k, v] : sw.items()) {
      if (k == "h") c.sweep_h = parse_axis(v, "h");
      else if (k == "rho2") c.sweep_rho2 = parse_axis(v, "rho2");
      else if (k == "simulate_steps") c.sweep_simulate_steps = get_count(sw, "simulate_steps");
      else throw ConfigError("unknown sweep key '" + k + "'");
    }
  }

  if (c.horizon) {
    if (!(*c.horizon >= 0.0) || !(c.h > 0.0))
      throw ConfigError("horizon must be >= 0 and h > 0");
    c.n_steps = static_cast<std::uint64_t>(std::llround(*c.horizon / c.h));
  }
  validate(c);
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["d"] = c.d;
  j["K"] = c.K;
  j["ell"] = c.ell;
  j["lambda"] = c.lambda;
  j["rho2"] = c.rho2;
  j["h"] = c.h;
  j["scheme"] = std::string(to_string(c.scheme));
  if (c.horizon) j["horizon"] = *c.horizon;
  else j["steps"] = c.n_steps;
  j["s"] = c.s;
  j["epsilon"] = c.epsilon;
  j["seed"] = c.seed;
  j["N"] = c.N;
  j["c2"] = c.c2;
  j["delta2"] = c.delta2;
  if (c.s2) j["s2"] = *c.s2;
  j["s2_per_N"] = c.s2_per_N;
  j["eps_hat"] = c.eps_hat;
  j["exhaustive"] = c.exhaustive;
  j["out"] = c.out;
  j["runid"] = c.runid;
  j["cadence"] = c.cadence;
  j["threshold_factor"] = c.threshold_factor;
  if (!c.windows.empty()) {
    j["windows"] = json::array();
    for (const auto& [a, b] : c.windows) j["windows"].push_back({a, b});
  }
  if (c.sweep_h || c.sweep_rho2 || c.sweep_simulate_steps) {
    json sw = json::object();
    if (c.sweep_h) sw["h"] = c.sweep_h->values;
    if (c.sweep_rho2) sw["rho2"] = c.sweep_rho2->values;
    if (c.sweep_simulate_steps) sw["simulate_steps"] = c.sweep_simulate_steps;
    j["sweep"] = sw;
  }
  return j;
}

json merge_config_json(json base, const json& overrides) {
  if (base.is_null()) base = json::object();
  if (!base.is_object() || !overrides.is_object())
    throw ConfigError("config and overrides must be JSON objects");
  for (const auto& [k, v] : overrides.items()) {
    if (k == "rho") base.erase("rho2");
    if (k == "rho2") base.erase("rho");
    if (k == "steps") base.erase("horizon");
    if (k == "horizon") base.erase("steps");
    if (k == "s2_per_N") base.erase("s2");
    if (k == "s2") base.erase("s2_per_N");
    if (k == "sweep" && base.contains("sweep") && base["sweep"].is_object() && v.is_object())
      for (const auto& [sk, sv] : v.items()) base["sweep"][sk] = sv;
    else
      base[k] = v;
  }
  return base;
}

void validate(const RunConfig& c) {
  if (c.d < 1) throw ConfigError("d must be >= 1");
  if (c.K < 1) throw ConfigError("K must be >= 1");
  if (static_cast<int>(c.ell.size()) != c.d) throw ConfigError("ell must have d components");
  if (!Grid(c.K, c.d).contains(c.ell)) throw ConfigError("ell outside {-K,...,K-1}^d");
  if (c.lambda != 1 && c.lambda != -1) throw ConfigError("lambda must be +1 or -1");
  if (!(c.rho2 >= 0.0) || !std::isfinite(c.rho2)) throw ConfigError("rho2 must be >= 0");
  if (!(c.h > 0.0) || !std::isfinite(c.h)) throw ConfigError("h must be > 0");
  if (!(c.s >= 0.0)) throw ConfigError("s must be >= 0");
  if (!(c.epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
  if (c.epsilon > 0.0 && !(c.epsilon < c.rho()))
    throw ConfigError("epsilon must be < rho");
  if (c.N < 2) throw ConfigError("N must be >= 2");
  if (!(c.c2 > 0.0) || !(c.delta2 > 0.0)) throw ConfigError("c2 and delta2 must be > 0");
  if (c.s2 ? !(*c.s2 > 0.0) : !(c.s2_per_N > 0.0)) throw ConfigError("s2 must be > 0");
  if (!(c.eps_hat >= 0.0)) throw ConfigError("eps_hat must be >= 0");
  if (!(c.threshold_factor > 0.0)) throw ConfigError("threshold_factor must be > 0");
  if (c.runid.empty() || c.runid.find('/') != std::string::npos)
    throw ConfigError("runid must be a nonempty file-name stem");
  for (const auto& [a, b] : c.windows)
    if (!(a <= b)) throw ConfigError("windows: need t0 <= t1");
  auto check_axis = [](const std::optional<SweepAxis>& ax, const char* name, bool positive) {
    if (!ax) return;
    for (double v : ax->values)
      if (positive ? !(v > 0.0) : !(v >= 0.0))
        throw ConfigError(std::string("sweep.") + name + ": value out of range");
  };
  check_axis(c.sweep_h, "h", true);
  check_axis(c.sweep_rho2, "rho2", false);
}

RunConfig preset(const std::string& name) {
  RunConfig c;
  c.d = 1;
  c.K = 16;
  c.ell = {0};
  c.lambda = -1;
  c.rho2 = 0.4;
  c.s = 5.0;
  c.epsilon = 0.01;
  c.N = 5;
  c.c2 = 8.0;
  c.delta2 = 0.1;
  c.eps_hat = 0.0;
  c.runid = name;
  if (name == "fig1") {
    c.h = 0.04;
    c.s2_per_N = 5.0;
  } else if (name == "fig2") {
    c.h = 0.044;
    c.s2_per_N = 1.6;
  } else if (name == "fig3") {
    c.h = 0.042;
    c.s2_per_N = 5.0;
    c.cadence = 5;
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected fig1, fig2, fig3)");
  }
  c.horizon = 1e4;
  c.n_steps = static_cast<std::uint64_t>(std::llround(*c.horizon / c.h));
  return c;
}

}  // namespace ssfm
