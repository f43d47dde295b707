#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ssfm/integrator.hpp"
#include "ssfm/transforms.hpp"

namespace ssfm {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// m -> I_m = sum over modes l with n(l) = m of |xi_l|^2.
struct SuperActionSet {
  std::map<long long, double> I;
  double total() const;
};

SuperActionSet super_actions(const XiField& xi, const DiagonalizerSet& diag);

/// sum_m max(1, m)^s |I_m - I0_m|; throws if the class sets differ.
double weighted_deviation(const SuperActionSet& now, const SuperActionSet& initial,
                          double s);

struct InstabilityVerdict {
  bool unstable = false;
  std::optional<std::uint64_t> onset_step;  // first sample >= 2 eps
  std::optional<double> growth_rate;         // per step, slope of log distance
  std::size_t fit_points = 0;
};

/// unstable iff some value exceeds threshold_factor * eps. The growth rate is
/// the least-squares slope of log(value) against step over the samples from
/// the first crossing of 2 eps up to (excluding) the first crossing of 50 eps.
InstabilityVerdict detect_instability(std::span<const std::uint64_t> steps,
                                      std::span<const double> values, double eps,
                                      double threshold_factor);

struct SeriesSample {
  double t = 0.0;
  double mass = 0.0;
  double orbital_distance = 0.0;
  double D = 0.0;
};

struct SpectrumSnapshot {
  double t = 0.0;
  std::vector<double> abs_u;  // flat grid order
};

struct TrajectoryDiagnostics {
  Grid grid{1, 1};
  std::vector<std::uint64_t> steps;
  std::vector<SeriesSample> series;
  std::vector<SpectrumSnapshot> spectrum;
  nlohmann::json meta = nlohmann::json::object();
};

struct RecorderOptions {
  Mode ell{0};
  double h = 0.0;
  double s = 5.0;
  /// Snapshot windows in time units; both ends inclusive.
  std::vector<std::pair<double, double>> windows;
};

/// Observer that fills a TrajectoryDiagnostics. With diagonalisers present the
/// super-action deviation D is tracked, otherwise D is NaN.
class DiagnosticsRecorder {
 public:
  DiagnosticsRecorder(TrajectoryDiagnostics& out, RecorderOptions opts,
                      std::optional<DiagonalizerSet> diag);

  bool operator()(std::uint64_t step, const SpectralField& f);

  const std::optional<SuperActionSet>& initial_actions() const { return initial_; }

 private:
  TrajectoryDiagnostics& out_;
  RecorderOptions opts_;
  std::optional<DiagonalizerSet> diag_;
  std::optional<SuperActionSet> initial_;
};

/// Paths of the three files written by emit.
struct EmittedFiles {
  std::filesystem::path series;
  std::filesystem::path spectrum;
  std::filesystem::path meta;
};

/// Writes <runid>_series.csv, <runid>_spectrum.csv and <runid>_meta.json into dir.
EmittedFiles emit(const TrajectoryDiagnostics& diag, const std::filesystem::path& dir,
                  const std::string& runid);

/// Reads back a series CSV written by emit.
std::vector<SeriesSample> read_series_csv(const std::filesystem::path& path);

/// %.17g.
std::string format_double(double v);

}  // namespace ssfm
