#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "ssfm/diagnostics.hpp"
#include "ssfm/random.hpp"

using namespace ssfm;
namespace fs = std::filesystem;

namespace {

LinearizationParams preset_params(double h) {
  return {Grid(16, 1), Mode{0}, h, std::sqrt(0.4), -1};
}

XiField xi_zero(const LinearizationParams& p) {
  return {p, std::vector<cplx>(p.grid.size()), 0.0, p.rho};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() /
                     ("ssfm_diag_" + name + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  return {std::istreambuf_iterator<char>(is), {}};
}

}  // namespace

TEST(SuperActions, Examples) {
  const auto p = preset_params(0.04);
  const auto set = build_diagonalizers(p);
  auto xi = xi_zero(p);
  auto I = super_actions(xi, set);
  EXPECT_EQ(I.I.size(), 16u);
  for (const auto& [m, v] : I.I) EXPECT_EQ(v, 0.0);

  xi.xi[p.grid.flat_index(Mode{3})] = 1e-3;
  I = super_actions(xi, set);
  for (const auto& [m, v] : I.I) EXPECT_EQ(v, m == 9 ? 1e-6 : 0.0);

  xi = xi_zero(p);
  xi.xi[p.grid.flat_index(Mode{2})] = cplx(0.3, 0.1);
  xi.xi[p.grid.flat_index(Mode{-2})] = cplx(0.0, 0.2);
  I = super_actions(xi, set);
  EXPECT_DOUBLE_EQ(I.I.at(4), 0.1 + 0.04);
}

TEST(SuperActions, Partition) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1e-3);
  for (auto p : {preset_params(0.04), LinearizationParams{Grid(5, 2), Mode{1, -2}, 0.01, 0.5, 1}}) {
    const auto set = build_diagonalizers(p);
    auto xi = xi_zero(p);
    double total = 0;
    for (std::size_t i = 0; i < xi.xi.size(); ++i) {
      if (i == p.grid.zero_index()) continue;
      xi.xi[i] = {n(rng), n(rng)};
      total += std::norm(xi.xi[i]);
    }
    EXPECT_NEAR(super_actions(xi, set).total(), total, 1e-15 * total);
    EXPECT_NEAR(super_actions(xi, set).total(), std::pow(xi_norm(xi, 0.0), 2), 1e-15 * total);
  }
}

TEST(WeightedDeviation, Examples) {
  SuperActionSet a;
  a.I = {{1, 0.5}, {4, 0.25}, {9, 0.0}};
  EXPECT_EQ(weighted_deviation(a, a, 5.0), 0.0);
  SuperActionSet a0 = a;
  a0.I[4] = 0.0;
  SuperActionSet b = a0;
  b.I[4] = 1e-8;
  EXPECT_NEAR(weighted_deviation(b, a0, 5.0), 1.024e-5, 1e-20);
  SuperActionSet zero;
  zero.I = {{0, 0.0}};
  SuperActionSet one;
  one.I = {{0, 2.0}};
  EXPECT_EQ(weighted_deviation(one, zero, 5.0), 2.0);  // max(1, m) with m = 0
  SuperActionSet c;
  c.I = {{1, 0.5}, {4, 0.25}};
  EXPECT_THROW(weighted_deviation(c, a, 5.0), std::invalid_argument);
  SuperActionSet d;
  d.I = {{1, 0.5}, {4, 0.25}, {16, 0.0}};
  EXPECT_THROW(weighted_deviation(d, a, 5.0), std::invalid_argument);
}

TEST(DetectInstability, Examples) {
  const double eps = 0.01;
  std::vector<std::uint64_t> steps(100);
  std::vector<double> flat(100, eps);
  for (std::size_t i = 0; i < steps.size(); ++i) steps[i] = i * 10;
  const auto v = detect_instability(steps, flat, eps, 10.0);
  EXPECT_FALSE(v.unstable);
  EXPECT_FALSE(v.onset_step.has_value());

  // exact exponential: fitted slope equals the rate
  const double rate = 0.015;
  std::vector<double> grow(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i)
    grow[i] = std::min(eps * 0.5 * std::exp(rate * steps[i]), 0.9);
  const auto g = detect_instability(steps, grow, eps, 10.0);
  EXPECT_TRUE(g.unstable);
  ASSERT_TRUE(g.growth_rate.has_value());
  EXPECT_NEAR(*g.growth_rate, rate, 1e-12);
  ASSERT_TRUE(g.onset_step.has_value());
  EXPECT_GE(grow[*g.onset_step / 10], 2 * eps);
  EXPECT_LT(grow[*g.onset_step / 10 - 1], 2 * eps);
  // saturated samples beyond 50 eps are excluded from the fit
  EXPECT_LT(g.fit_points, steps.size());

  EXPECT_THROW(detect_instability(steps, std::vector<double>(3), eps, 10.0),
               std::invalid_argument);
}

TEST(DetectInstability, MonotoneInThreshold) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint64_t> steps(50);
    std::vector<double> vals(50);
    for (std::size_t i = 0; i < 50; ++i) {
      steps[i] = i;
      vals[i] = 0.01 * std::exp(5.0 * u(rng));
    }
    bool prev = true;
    for (double f = 1.0; f < 200.0; f *= 1.3) {
      const bool now = detect_instability(steps, vals, 0.01, f).unstable;
      EXPECT_FALSE(now && !prev);
      prev = now;
    }
  }
}

TEST(Recorder, SeriesAndWindows) {
  const auto p = preset_params(0.04);
  DatumSpec ds;
  ds.rho = p.rho;
  ds.epsilon = 0.01;
  ds.seed = 4;
  const auto u0 = random_initial_datum(ds);
  TrajectoryDiagnostics out;
  RecorderOptions opts{p.ell, p.h, 5.0, {{0.0, 2.0}, {8.0, 10.0}}};
  DiagnosticsRecorder rec(out, opts, build_diagonalizers(p));
  const auto r = integrate(u0, {Scheme::LieTrotter, p.h}, -1, 250, 5, std::ref(rec));
  EXPECT_FALSE(r.aborted);
  ASSERT_EQ(out.series.size(), 51u);
  EXPECT_EQ(out.series.front().D, 0.0);
  EXPECT_NEAR(out.series.front().orbital_distance, 0.01, 1e-14);
  for (const auto& s : out.series) {
    EXPECT_NEAR(s.mass, 0.4, 1e-12 * 0.4);
    EXPECT_TRUE(std::isfinite(s.D));
    EXPECT_LE(s.D, 1e3 * 0.01 * 0.01);
  }
  // snapshots every 5 steps inside [0, 2] and [8, 10]: t = 0, 0.2, ..., 2 and 8, ..., 10
  ASSERT_EQ(out.spectrum.size(), 22u);
  EXPECT_EQ(out.spectrum.front().t, 0.0);
  EXPECT_NEAR(out.spectrum.back().t, 10.0, 1e-12);
  for (const auto& snap : out.spectrum) {
    const bool in = (snap.t >= 0 && snap.t <= 2) || (snap.t >= 8 && snap.t <= 10);
    EXPECT_TRUE(in);
    EXPECT_EQ(snap.abs_u.size(), p.grid.size());
  }
}

TEST(Recorder, WithoutDiagonalizersDIsNaN) {
  TrajectoryDiagnostics out;
  DiagnosticsRecorder rec(out, {Mode{0}, 0.042, 5.0, {}}, std::nullopt);
  const auto pw = plane_wave(Grid(8, 1), {0.5, Mode{0}, -1});
  rec(0, pw);
  ASSERT_EQ(out.series.size(), 1u);
  EXPECT_TRUE(std::isnan(out.series[0].D));
  EXPECT_TRUE(out.spectrum.empty());
}

TEST(Emit, EmptyTrajectoryIsHeaderOnly) {
  const auto dir = scratch_dir("empty");
  TrajectoryDiagnostics d;
  const auto files = emit(d, dir, "run");
  EXPECT_EQ(slurp(files.series), "t,mass,orbital_distance,D\n");
  EXPECT_EQ(slurp(files.spectrum), "t,j,abs_uj\n");
  EXPECT_TRUE(read_series_csv(files.series).empty());
  EXPECT_EQ(files.meta.filename(), "run_meta.json");
  fs::remove_all(dir);
}

TEST(Emit, RoundTripIsBitExact) {
  const auto dir = scratch_dir("roundtrip");
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TrajectoryDiagnostics d;
  d.grid = Grid(4, 1);
  for (int i = 0; i < 500; ++i) {
    d.steps.push_back(i);
    d.series.push_back({u(rng) * 1e4, std::exp(30 * u(rng)), std::ldexp(u(rng), -900),
                        i == 7 ? std::numeric_limits<double>::quiet_NaN() : u(rng) / 3});
  }
  d.spectrum.push_back({1.5, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}});
  d.meta = {{"seed", 12}, {"scheme", "lie-trotter"}};
  const auto files = emit(d, dir, "rt");
  const auto back = read_series_csv(files.series);
  ASSERT_EQ(back.size(), d.series.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].t, d.series[i].t);
    EXPECT_EQ(back[i].mass, d.series[i].mass);
    EXPECT_EQ(back[i].orbital_distance, d.series[i].orbital_distance);
    if (i == 7) EXPECT_TRUE(std::isnan(back[i].D));
    else EXPECT_EQ(back[i].D, d.series[i].D);
  }
  const std::string spec = slurp(files.spectrum);
  EXPECT_NE(spec.find("1.5,-4,0.10000000000000001\n"), std::string::npos);
  EXPECT_NE(spec.find("1.5,3,0.80000000000000004\n"), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(slurp(files.meta)), d.meta);
  fs::remove_all(dir);
}

TEST(Emit, ErrorsCarryPath) {
  const auto dir = scratch_dir("blocked");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  try {
    emit(TrajectoryDiagnostics{}, dir / "file" / "sub", "r");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("file"), std::string::npos);
  }
  std::ofstream(dir / "bad.csv") << "t,mass\n";
  EXPECT_THROW(read_series_csv(dir / "bad.csv"), IoError);
  std::ofstream(dir / "bad2.csv") << "t,mass,orbital_distance,D\n1,2,x,4\n";
  EXPECT_THROW(read_series_csv(dir / "bad2.csv"), IoError);
  EXPECT_THROW(read_series_csv(dir / "missing.csv"), IoError);
  fs::remove_all(dir);
}
