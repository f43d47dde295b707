#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ssfm/grid.hpp"
#include "ssfm/integrator.hpp"

namespace ssfm {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Values along one sweep axis: explicit list, or `count` points from `from` to `to`.
struct SweepAxis {
  std::vector<double> values;
};

struct RunConfig {
  int d = 1;
  int K = 16;
  Mode ell{0};
  int lambda = -1;
  double rho2 = 0.4;
  double h = 0.04;
  Scheme scheme = Scheme::LieTrotter;
  std::uint64_t n_steps = 250000;
  std::optional<double> horizon;  // when set, n_steps = round(horizon / h)
  double s = 5.0;
  double epsilon = 0.01;
  std::uint64_t seed = 1;

  int N = 2;
  double c2 = 8.0;
  double delta2 = 0.1;
  std::optional<double> s2;       // absolute s2
  double s2_per_N = 5.0;          // s2 = s2_per_N * N when s2 is unset
  double eps_hat = 0.0;
  bool exhaustive = false;

  std::string out = ".";
  std::string runid = "ssfm";
  std::uint64_t cadence = 0;      // 0 selects ceil(n_steps / 2000)
  double threshold_factor = 10.0;
  std::vector<std::pair<double, double>> windows;  // empty selects [0,200], [T-200,T]

  std::optional<SweepAxis> sweep_h;
  std::optional<SweepAxis> sweep_rho2;
  std::uint64_t sweep_simulate_steps = 0;

  double rho() const;
  double horizon_time() const;
  double s2_for(int n) const;
  std::uint64_t effective_cadence() const;
  std::vector<std::pair<double, double>> effective_windows() const;
};

/// Defaults overlaid with `j`; later keys win. Unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

/// Overlay `overrides` onto `base` (object merge). Setting one of rho/rho2 or
/// steps/horizon drops the other from the base.
nlohmann::json merge_config_json(nlohmann::json base, const nlohmann::json& overrides);

void validate(const RunConfig& c);

/// Parameters of the fig1/fig2/fig3 experiments.
RunConfig preset(const std::string& name);

}  // namespace ssfm
