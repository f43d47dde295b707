#include "ssfm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "ssfm/random.hpp"

namespace ssfm {

using nlohmann::json;

namespace {

constexpr std::string_view kVersion = "1.0.0";

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

LinearizationParams linearization(const RunConfig& c, double h, double rho2) {
  LinearizationParams p;
  p.grid = Grid(c.K, c.d);
  p.ell = c.ell;
  p.h = h;
  p.rho = std::sqrt(rho2);
  p.lambda = c.lambda;
  return p;
}

ResonanceParams resonance_params(const RunConfig& c, int n) {
  ResonanceParams r;
  r.N = n;
  r.c2 = c.c2;
  r.delta2 = c.delta2;
  r.s2 = c.s2_for(n);
  r.eps_hat = c.eps_hat;
  r.exhaustive = c.exhaustive;
  return r;
}

json class_vector_json(const ClassVector& k, const ResonanceReport& r,
                       const FrequencyTable& t) {
  json out = json::array();
  for (const auto& [c, coef] : k)
    out.push_back({{"class", c},
                   {"j", t.modes[r.classes[c].representative].j},
                   {"k", coef}});
  return out;
}

json witness_json(const ResonanceWitness& w, const ResonanceReport& r,
                  const FrequencyTable& t) {
  return {{"k", class_vector_json(w.k, r, t)},
          {"delta", w.delta},
          {"l", t.modes[r.classes[w.l_class].max_member].j},
          {"lhs", w.lhs},
          {"rhs", w.rhs},
          {"margin", w.margin()}};
}

}  // namespace

std::string_view version() { return kVersion; }

json to_json(const LinearStabilityReport& r) {
  return {{"holds", r.holds},
          {"c1_certified", r.c1_certified},
          {"worst_j", r.worst_j},
          {"worst_lhs", r.worst_lhs}};
}

json to_json(const FrequencyTable& t) {
  json modes = json::array();
  for (const auto& m : t.modes) {
    json e = {{"j", m.j},
              {"n", m.n},
              {"shift", m.shift},
              {"alpha", cplx_json(m.alpha)},
              {"beta", cplx_json(m.beta)},
              {"growth", m.growth},
              {"omega", opt_json(m.omega)},
              {"varpi", opt_json(m.varpi)}};
    if (!m.omega_error.empty()) e["omega_error"] = m.omega_error;
    if (!m.varpi_error.empty()) e["varpi_error"] = m.varpi_error;
    modes.push_back(std::move(e));
  }
  return {{"h", t.params.h},
          {"rho", t.params.rho},
          {"lambda", t.params.lambda},
          {"ell", t.params.ell},
          {"varpi_available", t.varpi_available},
          {"varpi_note", t.varpi_note},
          {"eps_hat", opt_json(t.eps_hat)},
          {"max_growth", t.max_growth()},
          {"modes", std::move(modes)}};
}

json to_json(const ResonanceReport& r, const FrequencyTable& t) {
  json classes = json::array();
  for (const auto& c : r.classes) {
    json members = json::array();
    for (std::size_t m : c.members) members.push_back(t.modes[m].j);
    classes.push_back({{"varpi", c.varpi},
                       {"members", std::move(members)},
                       {"representative", t.modes[c.representative].j},
                       {"n_values", c.n_values}});
  }
  json wb = json::array();
  for (const auto& w : r.witnesses_b) wb.push_back(witness_json(w, r, t));
  json wc = json::array();
  for (const auto& w : r.witnesses_c)
    wc.push_back({{"k", class_vector_json(w.k, r, t)},
                  {"residual", w.residual},
                  {"reason", w.reason}});
  return {{"holds", r.holds},
          {"N", r.params.N},
          {"c2", r.params.c2},
          {"delta2", r.params.delta2},
          {"s2", r.params.s2},
          {"eps_hat", r.params.eps_hat},
          {"frequency_source", r.frequency_source},
          {"quantifier_reading", r.quantifier_reading},
          {"part_a", r.part_a},
          {"max_frequency_gap", r.max_frequency_gap},
          {"part_b", r.part_b},
          {"part_c", r.part_c},
          {"enumeration_complete", r.enumeration_complete},
          {"note", r.note},
          {"vectors_checked", r.vectors_checked},
          {"near_resonant", r.near_resonant},
          {"complete_resonances", r.complete_resonances},
          {"violations_b", r.violations_b},
          {"violations_c", r.violations_c},
          {"tightest", r.tightest ? witness_json(*r.tightest, r, t) : json(nullptr)},
          {"witnesses_b", std::move(wb)},
          {"witnesses_c", std::move(wc)},
          {"classes", std::move(classes)}};
}

CheckOutcome run_check(const RunConfig& c) {
  validate(c);
  const LinearizationParams p = linearization(c, c.h, c.rho2);
  const LinearStabilityReport a1 = check_assumption1(p);
  const FrequencyTable table = build_frequency_table(p);

  json per_n = json::array();
  bool a2 = true;
  for (int n = 2; n <= c.N; ++n) {
    const ResonanceReport r = check_assumption2(table, resonance_params(c, n));
    a2 = a2 && r.holds;
    per_n.push_back(to_json(r, table));
  }
  const double max_h = cfl_max_h(c.d, c.K, c.rho(), c.N);

  CheckOutcome out;
  out.report = {{"version", version()},
                {"config", config_to_json(c)},
                {"assumption1", to_json(a1)},
                {"frequency_table", to_json(table)},
                {"assumption2", {{"holds", a2}, {"per_N", std::move(per_n)}}},
                {"cfl", {{"d", c.d},
                         {"K", c.K},
                         {"rho0", c.rho()},
                         {"N", c.N},
                         {"max_h", max_h},
                         {"satisfied", c.h <= max_h}}},
                {"holds", a1.holds && a2}};
  out.status = a1.holds && a2 ? ExitStatus::Ok : ExitStatus::AssumptionFailed;
  return out;
}

SimulateOutcome run_simulate(const RunConfig& c, bool write_files) {
  validate(c);
  const Grid grid(c.K, c.d);
  DatumSpec ds;
  ds.grid = grid;
  ds.rho = c.rho();
  ds.ell = c.ell;
  ds.s = c.s;
  ds.epsilon = c.epsilon;
  ds.seed = c.seed;
  SpectralField u0 = [&] {
    try {
      return random_initial_datum(ds);
    } catch (const MassDeficitError& e) {
      throw ConfigError(e.what());
    }
  }();

  const LinearizationParams p = linearization(c, c.h, c.rho2);
  const LinearStabilityReport a1 = check_assumption1(p);
  const FrequencyTable table = build_frequency_table(p);
  std::optional<DiagonalizerSet> diag;
  std::string diag_note;
  if (a1.holds) {
    try {
      diag = build_diagonalizers(p);
    } catch (const TransformError& e) {
      diag_note = e.what();
    }
  } else {
    diag_note = "assumption 1 fails: super-actions undefined";
  }

  SimulateOutcome out;
  TrajectoryDiagnostics& td = out.diagnostics;
  td.grid = grid;
  RecorderOptions ro;
  ro.ell = c.ell;
  ro.h = c.h;
  ro.s = c.s;
  ro.windows = c.effective_windows();
  DiagnosticsRecorder rec(td, ro, std::move(diag));
  const std::uint64_t cadence = c.effective_cadence();
  const IntegrationResult res =
      integrate(u0, {c.scheme, c.h}, c.lambda, c.n_steps, cadence,
                [&rec](std::uint64_t n, const SpectralField& f) { return rec(n, f); });

  std::vector<double> dist;
  double max_dist = 0.0, max_D = 0.0, max_drift = 0.0;
  const double m0 = td.series.empty() ? 0.0 : td.series.front().mass;
  bool have_D = false;
  for (const auto& s : td.series) {
    dist.push_back(s.orbital_distance);
    max_dist = std::max(max_dist, s.orbital_distance);
    if (std::isfinite(s.D)) {
      have_D = true;
      max_D = std::max(max_D, s.D);
    }
    if (m0 > 0.0) max_drift = std::max(max_drift, std::abs(s.mass - m0) / m0);
  }
  const InstabilityVerdict iv = detect_instability(td.steps, dist, c.epsilon, c.threshold_factor);
  const double predicted = std::log(table.max_growth());
  const double nan = std::numeric_limits<double>::quiet_NaN();

  json summary = {
      {"runid", c.runid},
      {"steps_requested", c.n_steps},
      {"steps_done", res.steps_done},
      {"cadence", cadence},
      {"samples", td.series.size()},
      {"non_finite", res.non_finite},
      {"aborted", res.aborted},
      {"abort_reason", res.abort_reason},
      {"initial_mass", m0},
      {"max_relative_mass_drift", max_drift},
      {"initial_orbital_distance", td.series.empty() ? nan : td.series.front().orbital_distance},
      {"max_orbital_distance", max_dist},
      {"max_D", have_D ? json(max_D) : json(nullptr)},
      {"super_actions_note", diag_note},
      {"assumption1", to_json(a1)},
      {"instability",
       {{"unstable", iv.unstable},
        {"threshold_factor", c.threshold_factor},
        {"onset_step", iv.onset_step ? json(*iv.onset_step) : json(nullptr)},
        {"onset_time", iv.onset_step ? json(static_cast<double>(*iv.onset_step) * c.h)
                                     : json(nullptr)},
        {"growth_rate_per_step", opt_json(iv.growth_rate)},
        {"fit_points", iv.fit_points},
        {"predicted_growth_rate_per_step", predicted}}}};

  td.meta = {{"version", version()},
             {"config", config_to_json(c)},
             {"scheme", std::string(to_string(c.scheme))},
             {"h", c.h},
             {"K", c.K},
             {"d", c.d},
             {"rho", c.rho()},
             {"lambda", c.lambda},
             {"ell", c.ell},
             {"s", c.s},
             {"epsilon", c.epsilon},
             {"seed", c.seed},
             {"datum",
              {{"prng", "philox4x32-10"},
               {"gaussian", "box-muller"},
               {"damping", "|j-ell|^-(s+1)"},
               {"normalisation", "||F_not_ell u||_s = epsilon, ||u||_0 = rho"}}},
             {"summary", summary}};

  if (write_files) {
    const EmittedFiles f = emit(td, c.out, c.runid);
    summary["files"] = {{"series", f.series.string()},
                        {"spectrum", f.spectrum.string()},
                        {"meta", f.meta.string()}};
  }
  out.summary = std::move(summary);
  out.status = res.non_finite ? ExitStatus::BlowUp : ExitStatus::Ok;
  return out;
}

SweepOutcome run_sweep(const RunConfig& c, unsigned threads) {
  validate(c);
  const std::vector<double> hs = c.sweep_h ? c.sweep_h->values : std::vector<double>{c.h};
  const std::vector<double> r2s =
      c.sweep_rho2 ? c.sweep_rho2->values : std::vector<double>{c.rho2};
  std::vector<std::pair<double, double>> points;
  for (double h : hs)
    for (double r2 : r2s) points.emplace_back(h, r2);

  std::vector<json> rows(points.size());
  auto work = [&](std::size_t i) {
    const auto [h, r2] = points[i];
    json row = {{"h", h}, {"rho", std::sqrt(r2)}, {"rho2", r2}};
    try {
      RunConfig pc = c;
      pc.h = h;
      pc.rho2 = r2;
      pc.horizon.reset();
      pc.sweep_h.reset();
      pc.sweep_rho2.reset();
      validate(pc);
      const LinearizationParams p = linearization(pc, h, r2);
      const LinearStabilityReport a1 = check_assumption1(p);
      const FrequencyTable table = build_frequency_table(p);
      bool a2 = true;
      for (int n = 2; n <= pc.N && a2; ++n)
        a2 = check_assumption2(table, resonance_params(pc, n)).holds;
      row["assumption1"] = a1.holds;
      row["c1"] = a1.c1_certified;
      row["assumption2"] = a2;
      row["max_growth"] = table.max_growth();
      row["max_orbital_distance"] = nullptr;
      if (pc.sweep_simulate_steps > 0) {
        pc.n_steps = pc.sweep_simulate_steps;
        pc.windows = {{-1.0, -1.0}};
        const SimulateOutcome sim = run_simulate(pc, false);
        row["max_orbital_distance"] = sim.summary["max_orbital_distance"];
        if (sim.status == ExitStatus::BlowUp) throw std::runtime_error("simulation blow-up");
      }
      row["status"] = "ok";
    } catch (const std::exception& e) {
      row["status"] = "error";
      row["error"] = e.what();
    }
    rows[i] = std::move(row);
  };

  unsigned n_threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, points.size()));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < points.size(); i = next++) work(i);
      });
  }

  SweepOutcome out;
  out.rows = json::array();
  out.csv = "h,rho,assumption1,c1,assumption2,max_growth,max_orbital_distance,status\n";
  auto num = [](const json& v) {
    return v.is_number() ? format_double(v.get<double>()) : std::string();
  };
  auto flag = [](const json& v) {
    return v.is_boolean() ? std::string(v.get<bool>() ? "true" : "false") : std::string();
  };
  for (auto& row : rows) {
    out.csv += format_double(row["h"].get<double>()) + ',' +
               format_double(row["rho"].get<double>()) + ',' + flag(row.value("assumption1", json())) +
               ',' + num(row.value("c1", json())) + ',' +
               flag(row.value("assumption2", json())) + ',' +
               num(row.value("max_growth", json())) + ',' +
               num(row.value("max_orbital_distance", json())) + ',' +
               row["status"].get<std::string>() + '\n';
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace ssfm
