// Acceptance run: one PASS/FAIL line per criterion, then a summary line.
// Exit status is 0 only when every criterion passes.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "member_oracle.hpp"
#include "ssfm/config.hpp"
#include "ssfm/experiments.hpp"
#include "ssfm/integrator.hpp"
#include "ssfm/resonance.hpp"
#include "ssfm/stability.hpp"
#include "ssfm/transforms.hpp"

using namespace ssfm;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::LieTrotter: return "lie-trotter";
    case Scheme::StrangLinearOutside: return "strang-linear-outside";
    case Scheme::StrangNonlinearOutside: return "strang-nonlinear-outside";
  }
  return "?";
}

LinearizationParams preset_params(double h) {
  return {Grid(16, 1), Mode{0}, h, std::sqrt(0.4), -1};
}

// Plane-wave run shared by the exactness and mass criteria.
struct PlaneWaveRun {
  double max_dev = 0;
  double max_mass_drift = 0;
};

PlaneWaveRun plane_wave_run(Scheme scheme) {
  const double h = 0.04, rho = std::sqrt(0.4);
  const int lambda = -1;
  const Grid g(16, 1);
  const Mode ell{0};
  const double w = static_cast<double>(norm2(ell)) + lambda * rho * rho;
  const auto u0 = plane_wave(g, {rho, ell, lambda});
  const double m0 = std::sqrt(mass(u0.coeffs()));
  const std::size_t li = g.flat_index(ell);
  PlaneWaveRun r;
  integrate(u0, {scheme, h}, lambda, 250000, 1, [&](std::uint64_t n, const SpectralField& f) {
    const double t = static_cast<double>(n) * h;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const cplx want = i == li ? std::polar(rho, -w * t) : cplx(0.0);
      r.max_dev = std::max(r.max_dev, std::abs(f[i] - want));
    }
    r.max_mass_drift = std::max(r.max_mass_drift, std::abs(std::sqrt(mass(f.coeffs())) - m0) / m0);
    return true;
  });
  return r;
}

Verdict c1(const PlaneWaveRun& r) {
  return {r.max_dev <= 1e-10, fmt("max deviation %.3e (bound 1e-10)", r.max_dev)};
}

Verdict c2(const PlaneWaveRun& r) {
  return {r.max_mass_drift <= 1e-12, fmt("max relative mass drift %.3e (bound 1e-12)", r.max_mass_drift)};
}

Verdict c3(Scheme scheme) {
  bool ok = true;
  std::string detail;
  for (auto [name, want] : {std::pair{"fig1", true}, std::pair{"fig3", false}, std::pair{"fig2", true}}) {
    RunConfig c = preset(name);
    c.scheme = scheme;
    const auto out = run_check(c);
    const auto& r = out.report;
    const bool a1 = r["assumption1"]["holds"].get<bool>();
    const double c1v = r["assumption1"]["c1_certified"].is_number()
                           ? r["assumption1"]["c1_certified"].get<double>()
                           : std::nan("");
    const bool a2 = r["assumption2"]["holds"].get<bool>();
    bool good = a1 == want;
    if (want) good = good && c1v >= 0.2 && a2 && (out.status == ExitStatus::Ok);
    else good = good && out.status == ExitStatus::AssumptionFailed;
    ok = ok && good;
    detail += fmt("h=%.3f A1=%d c1=%.3f A2=%d; ", c.h, a1, c1v, a2);
  }
  return {ok, detail};
}

RunConfig stable_run(const char* name, Scheme scheme, std::uint64_t seed, double eps) {
  RunConfig c = preset(name);
  c.scheme = scheme;
  c.seed = seed;
  c.epsilon = eps;
  c.cadence = 1;
  c.windows = {{-1.0, -1.0}};
  return c;
}

// Runs the configurations concurrently and returns the summaries in order.
std::vector<nlohmann::json> simulate_all(const std::vector<RunConfig>& cs) {
  std::vector<std::future<nlohmann::json>> fs;
  for (const auto& c : cs)
    fs.push_back(std::async(std::launch::async, [c] {
      auto o = run_simulate(c, false);
      o.summary["status"] = static_cast<int>(o.status);
      return o.summary;
    }));
  std::vector<nlohmann::json> out;
  for (auto& f : fs) out.push_back(f.get());
  return out;
}

Verdict c4(Scheme scheme, std::vector<nlohmann::json>* lt_summaries = nullptr) {
  std::vector<RunConfig> cs;
  for (const char* name : {"fig1", "fig2"})
    for (std::uint64_t seed = 1; seed <= 5; ++seed) cs.push_back(stable_run(name, scheme, seed, 0.01));
  const auto sums = simulate_all(cs);
  if (lt_summaries) *lt_summaries = sums;
  double worst = 0;
  bool ok = true;
  for (const auto& s : sums) {
    const double d = s["max_orbital_distance"].get<double>();
    worst = std::max(worst, d);
    ok = ok && s["steps_done"] == s["steps_requested"] && d <= 10 * 0.01;
  }
  return {ok, fmt("10 runs (h in {0.04,0.044}, seeds 1-5), max ||F(u)||_5 = %.4e (bound 0.1)", worst)};
}

Verdict c5() {
  RunConfig c = preset("fig3");
  c.windows = {{-1.0, -1.0}};
  const auto o = run_simulate(c, false);
  const auto& iv = o.summary["instability"];
  const bool unstable = iv["unstable"].get<bool>();
  if (!unstable || iv["onset_step"].is_null() || iv["growth_rate_per_step"].is_null())
    return {false, "no instability detected"};
  const double onset = iv["onset_step"].get<double>() * c.h;
  const double rate = iv["growth_rate_per_step"].get<double>();
  const double pred = iv["predicted_growth_rate_per_step"].get<double>();
  const double rel = std::abs(rate - pred) / pred;
  return {onset < 1e4 && rel <= 0.2,
          fmt("onset t=%.1f, fitted rate %.4e/step, predicted %.4e/step, rel. diff %.3f", onset, rate,
              pred, rel)};
}

Verdict c6() {
  const double eta = 1e-6;
  double worst = 0;
  for (double h : {0.04, 0.044}) {
    const auto p = preset_params(h);
    const auto set = build_diagonalizers(p);
    for (std::size_t jj = 0; jj < p.grid.size(); ++jj) {
      if (jj == p.grid.zero_index()) continue;
      std::vector<cplx> c(p.grid.size());
      c[jj] = eta;
      c[p.grid.zero_index()] = std::sqrt(p.rho * p.rho - eta * eta);
      const SpectralField u0(p.grid, c);
      const auto xi0 = u_to_xi(u0, set);
      integrate(u0, {Scheme::LieTrotter, h}, p.lambda, 100, 1,
                [&](std::uint64_t n, const SpectralField& f) {
                  if (n == 0) return true;
                  const auto xi = u_to_xi(f, set);
                  for (std::size_t i = 0; i < p.grid.size(); ++i) {
                    if (i == p.grid.zero_index()) continue;
                    const cplx pred =
                        std::polar(1.0, -set.at(i).omega * static_cast<double>(n) * h) * xi0.xi[i];
                    worst = std::max(worst, std::abs(xi.xi[i] - pred) / static_cast<double>(n));
                  }
                  return true;
                });
    }
  }
  const bool oracle_ok = worst <= 100 * eta * eta;

  // varpi needs |j|^2 h < pi/2 at every h of the ladder: |j| <= 6
  const double hs[] = {0.04, 0.02, 0.01, 0.005};
  double lo = 1e9, hi = -1e9;
  for (int j = 1; j <= 6; ++j) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double h : hs) {
      const double x = std::log(h);
      const double y = std::log(std::abs(omega(Mode{j}, preset_params(h)) - varpi(Mode{j}, h, 0.4, -1)));
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
    lo = std::min(lo, slope);
    hi = std::max(hi, slope);
  }
  const bool slope_ok = lo >= 1.8 && hi <= 2.2;
  return {oracle_ok && slope_ok,
          fmt("oracle max err/step %.3e (bound 100 eta^2 = %.1e); |omega-varpi| slopes in [%.3f, %.3f] for |j|<=6",
              worst, 100 * eta * eta, lo, hi)};
}

LinearizationParams random_stable(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const int d = 1 + static_cast<int>(u(rng) * 2);
    const int K = 2 + static_cast<int>(u(rng) * (d == 1 ? 14 : 5));
    Mode ell(d);
    for (auto& e : ell) e = static_cast<int>(u(rng) * 2 * K) - K;
    LinearizationParams p{Grid(K, d), ell, 0.002 + 0.05 * u(rng), 1.2 * u(rng) + 0.05,
                          u(rng) < 0.5 ? -1 : 1};
    if (check_assumption1(p).holds) return p;
  }
}

Verdict c7() {
  std::mt19937_64 rng(7001);
  std::normal_distribution<double> nd(0.0, 1.0);
  double rt = 0, det = 0, offdiag = 0, diag = 0, bound_ratio = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_stable(rng);
    const auto set = build_diagonalizers(p);
    const Grid& g = p.grid;
    const std::size_t ci = g.flat_index(p.ell);
    std::vector<cplx> c(g.size());
    double rest = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (i != ci) rest += std::norm(c[i] = 1e-3 * p.rho * cplx(nd(rng), nd(rng)));
    c[ci] = std::polar(std::sqrt(p.rho * p.rho - rest), 0.7);
    const SpectralField u(g, c);
    const auto back = xi_to_u(u_to_xi(u, set), set);
    for (std::size_t i = 0; i < g.size(); ++i) rt = std::max(rt, std::abs(back[i] - u[i]));
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (i == g.zero_index()) continue;
      const auto& b = set.at(i);
      det = std::max(det, std::abs(mat_det(b.S) - 1.0));
      const Mat2 m = mat_mul(mat_mul(b.S, set.propagation_block(i)), b.S_inv);
      offdiag = std::max(offdiag, std::abs(m[1]) + std::abs(m[2]));
      const double sh = -2.0 * static_cast<double>(b.shift) * p.h;
      diag = std::max({diag, std::abs(m[0] - std::polar(1.0, -b.omega * p.h)),
                       std::abs(m[3] - std::polar(1.0, sh + b.omega * p.h))});
    }
    const double bound = diagonalizer_entry_bound(p.rho, check_assumption1(p).c1_certified);
    bound_ratio = std::max(bound_ratio, set.max_entry_modulus() / bound);
  }
  const bool ok = rt <= 1e-12 && det <= 1e-12 && offdiag <= 1e-12 && diag <= 1e-12 &&
                  bound_ratio <= 1 + 1e-12;
  return {ok, fmt("round trip %.2e, |det-1| %.2e, off-diag %.2e, diag %.2e, max entry/bound %.4f",
                  rt, det, offdiag, diag, bound_ratio)};
}

Verdict c8() {
  std::mt19937_64 rng(8008);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int agree = 0, total = 0, failing = 0;
  for (int K : {2, 3})
    for (int N : {2, 3})
      for (int trial = 0; trial < 20; ++trial) {
        const double rho = std::sqrt(0.5) * u(rng);
        const double h = cfl_max_h(1, K, rho, N) * (0.05 + 0.95 * u(rng));
        const auto t = build_frequency_table({Grid(K, 1), Mode{0}, h, rho, -1});
        const ResonanceParams q{N, 1.0, 0.5, 2.0 * N, 0.0, true, 1u << 20};
        const auto r = check_assumption2(t, q);
        const auto o = oracle::MemberOracle(t, q).run();
        std::set<std::pair<oracle::KeyedVector, double>> got_b;
        for (const auto& w : r.witnesses_b)
          got_b.insert({oracle::keyed(w.k, r), r.classes[w.l_class].varpi});
        std::set<oracle::KeyedVector> got_c;
        for (const auto& w : r.witnesses_c) got_c.insert(oracle::keyed(w.k, r));
        const bool oracle_holds = o.violations_b.empty() && o.violations_c.empty();
        failing += !oracle_holds;
        agree += got_b == o.violations_b && got_c == o.violations_c &&
                 (r.part_b && r.part_c) == oracle_holds;
        ++total;
      }
  return {agree == total, fmt("%d/%d cases agree (%d with violations)", agree, total, failing)};
}

Verdict c9(const std::vector<nlohmann::json>& full) {
  double worst_D = 0;
  for (const auto& s : full) worst_D = std::max(worst_D, s["max_D"].get<double>());
  std::vector<RunConfig> half;
  for (const char* name : {"fig1", "fig2"})
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
      half.push_back(stable_run(name, Scheme::LieTrotter, seed, 0.005));
  const auto hs = simulate_all(half);
  double lo = 1e300, hi = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double r = full[i]["max_D"].get<double>() / hs[i]["max_D"].get<double>();
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const bool ok = worst_D <= 1e3 * 0.01 * 0.01 && lo >= 2.5 && hi <= 6.0;
  return {ok, fmt("sup D = %.3e (bound 0.1); sup D(eps)/sup D(eps/2) in [%.2f, %.2f] (bound [2.5, 6])",
                  worst_D, lo, hi)};
}

Verdict c11() {
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int pass = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + static_cast<int>(u(rng) * 3);
    const int K = 1 + static_cast<int>(u(rng) * (d == 3 ? 6 : 12));
    const int N = 2 + static_cast<int>(u(rng) * 4);
    const int lambda = u(rng) < 0.5 ? -1 : 1;
    const double rho0 = lambda < 0 ? std::sqrt(0.5) * u(rng) : 2.0 * u(rng);
    const double h = cfl_max_h(d, K, rho0, N) * (0.01 + 0.99 * u(rng));
    pass += check_assumption1({Grid(K, d), Mode(d, 0), h, rho0 * u(rng), lambda}).holds;
  }
  return {pass == 200, fmt("%d/200 triples satisfy linear stability", pass)};
}

}  // namespace

int main() {
  int passed = 0, n = 0;
  auto report = [&](int id, const Verdict& v) {
    ++n;
    passed += v.pass;
    std::printf("criterion %2d: %s  %s\n", id, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  };
  auto guarded = [&](int id, const std::function<Verdict()>& f) {
    try {
      report(id, f());
    } catch (const std::exception& e) {
      report(id, {false, std::string("exception: ") + e.what()});
    }
  };

  PlaneWaveRun lt;
  std::vector<nlohmann::json> lt_runs;
  guarded(1, [&] { return c1(lt = plane_wave_run(Scheme::LieTrotter)); });
  guarded(2, [&] { return c2(lt); });
  guarded(3, [&] { return c3(Scheme::LieTrotter); });
  guarded(4, [&] { return c4(Scheme::LieTrotter, &lt_runs); });
  guarded(5, c5);
  guarded(6, c6);
  guarded(7, c7);
  guarded(8, c8);
  guarded(9, [&] { return lt_runs.size() == 10 ? c9(lt_runs) : Verdict{false, "criterion 4 runs missing"}; });
  guarded(10, [&] {
    bool ok = true;
    std::string detail;
    for (Scheme s : {Scheme::StrangLinearOutside, Scheme::StrangNonlinearOutside}) {
      const auto pw = plane_wave_run(s);
      const Verdict v[] = {c1(pw), c2(pw), c3(s), c4(s)};
      std::string flags;
      for (int i = 0; i < 4; ++i) {
        ok = ok && v[i].pass;
        flags += fmt("%d:%s ", i + 1, v[i].pass ? "PASS" : "FAIL");
      }
      detail += fmt("%s [%s| dev %s]; ", scheme_name(s), flags.c_str(), v[0].detail.c_str());
    }
    return Verdict{ok, detail};
  });
  guarded(11, c11);

  std::printf("acceptance: %d/%d criteria passed\n", passed, n);
  return passed == n ? 0 : 1;
}
