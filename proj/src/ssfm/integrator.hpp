#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssfm/fourier.hpp"
#include "ssfm/spectral_field.hpp"

namespace ssfm {

enum class Scheme {
  LieTrotter,              // L_h o N_h
  StrangLinearOutside,     // L_{h/2} o N_h o L_{h/2}
  StrangNonlinearOutside,  // N_{h/2} o L_h o N_{h/2}
};

std::string_view to_string(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);

struct StepScheme {
  Scheme variant = Scheme::LieTrotter;
  double h = 0.0;
};

/// Exact flow of i u_t = -Laplace u: u_j -> e^{-i|j|^2 t} u_j.
SpectralField linear_flow(const SpectralField& f, double t);

/// Exact flow of i u_t = lambda Q(|u|^2 u): pointwise phase e^{-i lambda |u|^2 t}
/// at the collocation points, then re-interpolation.
SpectralField nonlinear_flow(const SpectralField& f, double t, int lambda);

/// One step of the chosen splitting.
SpectralField step(const SpectralField& f, const StepScheme& scheme, int lambda);

/// Stateful stepper for a single trajectory; owns its transform and the
/// precomputed linear phases.
class SplitStepper {
 public:
  SplitStepper(const Grid& grid, StepScheme scheme, int lambda);

  const Grid& grid() const { return grid_; }
  const StepScheme& scheme() const { return scheme_; }
  int lambda() const { return lambda_; }

  /// Advances the coefficients by one step in place.
  void advance(std::vector<cplx>& coeffs);

 private:
  void apply_linear(std::vector<cplx>& c, const std::vector<cplx>& phase) const;
  void apply_nonlinear(std::vector<cplx>& c, double t);

  Grid grid_;
  StepScheme scheme_;
  int lambda_;
  FourierTransform transform_;
  std::vector<cplx> phase_full_;
  std::vector<cplx> phase_half_;
  std::vector<cplx> values_;
};

/// Called with (step index, current field). Returning false stops the run.
using Observer = std::function<bool(std::uint64_t, const SpectralField&)>;

struct IntegrationResult {
  SpectralField final_state;
  std::uint64_t steps_done = 0;
  bool aborted = false;       // observer failure, observer stop, or non-finite state
  bool non_finite = false;
  std::string abort_reason;
};

/// ceil(n_steps / 2000), at least 1.
std::uint64_t default_cadence(std::uint64_t n_steps);

/// Applies `n_steps` steps. The observer (if any) sees step 0, every
/// `cadence`-th step, and the final step.
IntegrationResult integrate(const SpectralField& f0, const StepScheme& scheme,
                            int lambda, std::uint64_t n_steps,
                            std::uint64_t cadence = 0,
                            const Observer& observer = {});

}  // namespace ssfm
