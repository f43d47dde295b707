#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ssfm/fourier.hpp"
#include "ssfm/grid.hpp"

namespace ssfm {

/// Trigonometric polynomial on a Grid, held as its Fourier coefficients in
/// the grid's shifted lexicographic order.
class SpectralField {
 public:
  explicit SpectralField(Grid grid);
  SpectralField(Grid grid, std::vector<cplx> coeffs);

  const Grid& grid() const { return grid_; }
  std::span<const cplx> coeffs() const { return coeffs_; }
  const cplx& operator[](std::size_t flat) const { return coeffs_[flat]; }
  cplx at(std::span<const int> j) const { return coeffs_[grid_.flat_index(j)]; }

  /// Values at the collocation points, same ordering as the modes.
  std::vector<cplx> values() const;

  /// Moves the coefficient storage out (the field is left empty).
  std::vector<cplx> release() && { return std::move(coeffs_); }

 private:
  Grid grid_;
  std::vector<cplx> coeffs_;
};

/// Plane wave rho e^{i(l.x - omega t)} with omega = |l|^2 + lambda rho^2.
struct PlaneWaveSpec {
  double rho = 0.0;
  Mode ell;
  int lambda = -1;

  double omega() const;
};

/// Interpolating trigonometric polynomial through collocation values.
SpectralField trig_interpolate(std::span<const cplx> values, const Grid& grid);

/// ||u||_s^2 = |u_0|^2 + sum_{j != 0} |j|^{2s} |u_j|^2.
double sobolev_norm(const SpectralField& f, double s);

/// Same as sobolev_norm on a raw coefficient array.
double sobolev_norm(std::span<const cplx> coeffs, const Grid& grid, double s);

/// sum_j |u_j|^2.
double mass(std::span<const cplx> coeffs);

/// The field with the ell-th coefficient removed and the rest shifted so that
/// ell lands on 0: out_j = f_{(j+ell) mod 2K}, out_0 = 0.
SpectralField project_away(const SpectralField& f, std::span<const int> ell);

/// ||project_away(f, ell)||_s, computed without materialising the shift.
double orbital_distance(std::span<const cplx> coeffs, const Grid& grid,
                        std::span<const int> ell, double s);

/// Exact numerical plane wave at time t.
SpectralField plane_wave(const Grid& grid, const PlaneWaveSpec& wave,
                         double t = 0.0);

/// |j|^{2s} evaluated as exp(s log |j|^2); 0 for j = 0.
double sobolev_weight(long long j_norm2, double s);

}  // namespace ssfm
