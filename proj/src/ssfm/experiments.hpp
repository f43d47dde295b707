#pragma once

#include <json.hpp>

#include "ssfm/config.hpp"
#include "ssfm/diagnostics.hpp"
#include "ssfm/resonance.hpp"
#include "ssfm/stability.hpp"

namespace ssfm {

enum class ExitStatus : int { Ok = 0, AssumptionFailed = 1, ConfigError = 2, BlowUp = 3 };

struct CheckOutcome {
  ExitStatus status = ExitStatus::Ok;
  nlohmann::json report;
};

/// Assumption 1, frequency table, Assumption 2 for every N' in [2, N], CFL bound.
CheckOutcome run_check(const RunConfig& c);

struct SimulateOutcome {
  ExitStatus status = ExitStatus::Ok;
  nlohmann::json summary;
  TrajectoryDiagnostics diagnostics;
};

/// Random datum, integration with diagnostics, file emission into c.out
/// (skipped when `write_files` is false).
SimulateOutcome run_simulate(const RunConfig& c, bool write_files = true);

struct SweepOutcome {
  nlohmann::json rows;  // one object per grid point
  std::string csv;      // header + one line per grid point
};

/// Cartesian product of the h and rho2 axes (a missing axis takes the base
/// value); points run concurrently on `threads` workers (0 = hardware).
SweepOutcome run_sweep(const RunConfig& c, unsigned threads = 0);

nlohmann::json to_json(const LinearStabilityReport& r);
nlohmann::json to_json(const FrequencyTable& t);
nlohmann::json to_json(const ResonanceReport& r, const FrequencyTable& t);

std::string_view version();

}  // namespace ssfm
