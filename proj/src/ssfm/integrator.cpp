#include "ssfm/integrator.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>
#include <utility>

namespace ssfm {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::LieTrotter:
      return "lie-trotter";
    case Scheme::StrangLinearOutside:
      return "strang-linear-outside";
    case Scheme::StrangNonlinearOutside:
      return "strang-nonlinear-outside";
  }
  return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  if (name == "lie-trotter" || name == "lt") return Scheme::LieTrotter;
  if (name == "strang-linear-outside" || name == "strang" || name == "strang-lnl")
    return Scheme::StrangLinearOutside;
  if (name == "strang-nonlinear-outside" || name == "strang-nln")
    return Scheme::StrangNonlinearOutside;
  return std::nullopt;
}

namespace {

void check_lambda(int lambda) {
  if (lambda != 1 && lambda != -1)
    throw std::invalid_argument("lambda must be +1 or -1");
}

std::vector<cplx> linear_phases(const Grid& g, double t) {
  std::vector<cplx> p(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    p[i] = std::polar(1.0, -static_cast<double>(norm2(g.mode_at(i))) * t);
  return p;
}

bool all_finite(const std::vector<cplx>& c) {
  for (const auto& z : c)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace

SpectralField linear_flow(const SpectralField& f, double t) {
  const Grid& g = f.grid();
  std::vector<cplx> out(f.coeffs().begin(), f.coeffs().end());
  for (std::size_t i = 0; i < g.size(); ++i)
    out[i] *= std::polar(1.0, -static_cast<double>(norm2(g.mode_at(i))) * t);
  return SpectralField(g, std::move(out));
}

SpectralField nonlinear_flow(const SpectralField& f, double t, int lambda) {
  check_lambda(lambda);
  std::vector<cplx> v = f.values();
  for (auto& z : v) z *= std::polar(1.0, -lambda * std::norm(z) * t);
  return trig_interpolate(v, f.grid());
}

SpectralField step(const SpectralField& f, const StepScheme& scheme, int lambda) {
  const double h = scheme.h;
  switch (scheme.variant) {
    case Scheme::LieTrotter:
      return linear_flow(nonlinear_flow(f, h, lambda), h);
    case Scheme::StrangLinearOutside:
      return linear_flow(nonlinear_flow(linear_flow(f, 0.5 * h), h, lambda), 0.5 * h);
    case Scheme::StrangNonlinearOutside:
      return nonlinear_flow(linear_flow(nonlinear_flow(f, 0.5 * h, lambda), h),
                            0.5 * h, lambda);
  }
  throw std::logic_error("step: unknown scheme");
}

SplitStepper::SplitStepper(const Grid& grid, StepScheme scheme, int lambda)
    : grid_(grid),
      scheme_(scheme),
      lambda_(lambda),
      transform_(grid),
      phase_full_(linear_phases(grid, scheme.h)),
      phase_half_(linear_phases(grid, 0.5 * scheme.h)),
      values_(grid.size()) {
  check_lambda(lambda);
  if (!(scheme.h > 0.0)) throw std::invalid_argument("step size h must be > 0");
}

void SplitStepper::apply_linear(std::vector<cplx>& c,
                                const std::vector<cplx>& phase) const {
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= phase[i];
}

void SplitStepper::apply_nonlinear(std::vector<cplx>& c, double t) {
  transform_.to_values(c, values_);
  for (auto& z : values_) z *= std::polar(1.0, -lambda_ * std::norm(z) * t);
  transform_.to_coeffs(values_, c);
}

void SplitStepper::advance(std::vector<cplx>& c) {
  const double h = scheme_.h;
  switch (scheme_.variant) {
    case Scheme::LieTrotter:
      apply_nonlinear(c, h);
      apply_linear(c, phase_full_);
      return;
    case Scheme::StrangLinearOutside:
      apply_linear(c, phase_half_);
      apply_nonlinear(c, h);
      apply_linear(c, phase_half_);
      return;
    case Scheme::StrangNonlinearOutside:
      apply_nonlinear(c, 0.5 * h);
      apply_linear(c, phase_full_);
      apply_nonlinear(c, 0.5 * h);
      return;
  }
}

std::uint64_t default_cadence(std::uint64_t n_steps) {
  return n_steps == 0 ? 1 : (n_steps + 1999) / 2000;
}

IntegrationResult integrate(const SpectralField& f0, const StepScheme& scheme,
                            int lambda, std::uint64_t n_steps,
                            std::uint64_t cadence, const Observer& observer) {
  if (cadence == 0) cadence = default_cadence(n_steps);
  SplitStepper stepper(f0.grid(), scheme, lambda);
  std::vector<cplx> c(f0.coeffs().begin(), f0.coeffs().end());

  IntegrationResult result{f0, 0, false, false, {}};

  auto notify = [&](std::uint64_t n) -> bool {
    if (!observer) return true;
    try {
      if (!observer(n, SpectralField(f0.grid(), c))) {
        result.aborted = true;
        result.abort_reason = "observer requested stop at step " + std::to_string(n);
        return false;
      }
    } catch (const std::exception& e) {
      result.aborted = true;
      result.abort_reason = std::string("observer failed at step ") +
                            std::to_string(n) + ": " + e.what();
      return false;
    }
    return true;
  };

  bool go = notify(0);
  for (std::uint64_t n = 1; go && n <= n_steps; ++n) {
    stepper.advance(c);
    result.steps_done = n;
    const bool sample = (n % cadence == 0) || n == n_steps;
    if (sample && !all_finite(c)) {
      result.aborted = true;
      result.non_finite = true;
      result.abort_reason = "non-finite state at step " + std::to_string(n);
      break;
    }
    if (sample) go = notify(n);
  }
  result.final_state = SpectralField(f0.grid(), std::move(c));
  return result;
}

}  // namespace ssfm
