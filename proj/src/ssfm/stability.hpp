#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssfm/grid.hpp"
#include "ssfm/spectral_field.hpp"

namespace ssfm {

/// Error raised by the frequency apparatus. `kind` names the failure.
class StabilityError : public std::runtime_error {
 public:
  enum class Kind {
    ZeroMode,
    DegenerateSign,
    UnstableMode,
    DomainError,
    NegativeDiscriminant,
  };
  StabilityError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Plane wave and discretisation around which the scheme is linearised.
struct LinearizationParams {
  Grid grid{1, 1};
  Mode ell{0};
  double h = 0.0;
  double rho = 0.0;
  int lambda = -1;
};

/// n(j) = |ell+j mod 2K|^2/2 + |ell-j mod 2K|^2/2 - |ell|^2. Rejects j = 0.
long long n_of_j(std::span<const int> j, std::span<const int> ell, const Grid& grid);

/// Integer shift |ell+j mod 2K|^2/2 - |ell-j mod 2K|^2/2.
long long shift_of_j(std::span<const int> j, std::span<const int> ell,
                     const Grid& grid);

struct ModeMatrix {
  cplx alpha;
  cplx beta;
};

/// Entries of the 2x2 block coupling w_j and conj(w_{-j}):
///   alpha = (1 - i h lambda rho^2) e^{-i n(j) h},  beta = -i h lambda rho^2 e^{-i n(j) h}.
ModeMatrix mode_matrix(std::span<const int> j, const LinearizationParams& p);

struct LinearStabilityReport {
  bool holds = false;
  double c1_certified = 0.0;
  Mode worst_j;
  double worst_lhs = 0.0;  // (cos(n h) - h lambda rho^2 sin(n h))^2 at worst_j
};

/// (cos(n(j)h) - h lambda rho^2 sin(n(j)h))^2 <= 1 - c1 h^2 for all j != 0;
/// reports the largest admissible c1.
LinearStabilityReport check_assumption1(const LinearizationParams& p);

/// Numerical frequency omega_j (phase of the linearised eigenvalue).
double omega(std::span<const int> j, const LinearizationParams& p);

/// Modulus of the dominant eigenvalue of the per-mode block; 1 when stable.
double growth_factor(std::span<const int> j, const LinearizationParams& p);

/// pi / ((N+1) (d K^2 + 2 rho0^2)).
double cfl_max_h(int d, int K, double rho0, int N);

/// tan(n h)/h; requires 0 < n h < pi/2.
double mu(long long n, double h);

/// |j|^2 - mu + sqrt(mu^2 + 2 lambda sigma mu), mu = mu(|j|^2, h). ell = 0 only.
double varpi(std::span<const int> j, double h, double sigma, int lambda);

struct ModeFrequency {
  std::size_t flat = 0;
  Mode j;
  long long n = 0;
  long long shift = 0;
  cplx alpha;
  cplx beta;
  double growth = 1.0;
  std::optional<double> omega;
  std::optional<double> varpi;
  std::string omega_error;
  std::string varpi_error;
};

struct FrequencyTable {
  LinearizationParams params;
  std::vector<ModeFrequency> modes;  // all j != 0, grid order
  bool varpi_available = false;
  std::optional<double> eps_hat;      // max |varpi - omega| when available
  std::string varpi_note;

  bool omega_complete() const;
  double max_growth() const;
};

FrequencyTable build_frequency_table(const LinearizationParams& p);

}  // namespace ssfm
