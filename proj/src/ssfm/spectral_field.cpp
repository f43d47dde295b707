#include "ssfm/spectral_field.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ssfm {

SpectralField::SpectralField(Grid grid)
    : grid_(grid), coeffs_(grid.size(), cplx(0.0, 0.0)) {}

SpectralField::SpectralField(Grid grid, std::vector<cplx> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size())
    throw std::invalid_argument("field: coefficient count " +
                                std::to_string(coeffs_.size()) +
                                " does not match grid size " +
                                std::to_string(grid_.size()));
}

std::vector<cplx> SpectralField::values() const {
  std::vector<cplx> v(grid_.size());
  thread_transform(grid_).to_values(coeffs_, v);
  return v;
}

double PlaneWaveSpec::omega() const {
  return static_cast<double>(norm2(ell)) + lambda * rho * rho;
}

SpectralField trig_interpolate(std::span<const cplx> values, const Grid& grid) {
  if (values.size() != grid.size())
    throw std::invalid_argument("trig_interpolate: expected " +
                                std::to_string(grid.size()) + " values, got " +
                                std::to_string(values.size()));
  std::vector<cplx> c(grid.size());
  thread_transform(grid).to_coeffs(values, c);
  return SpectralField(grid, std::move(c));
}

double sobolev_weight(long long j_norm2, double s) {
  if (j_norm2 == 0) return 0.0;
  if (s == 0.0) return 1.0;
  return std::exp(s * std::log(static_cast<double>(j_norm2)));
}

double sobolev_norm(std::span<const cplx> coeffs, const Grid& grid, double s) {
  if (coeffs.size() != grid.size())
    throw std::invalid_argument("sobolev_norm: size mismatch");
  double acc = std::norm(coeffs[grid.zero_index()]);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i == grid.zero_index()) continue;
    acc += sobolev_weight(norm2(grid.mode_at(i)), s) * std::norm(coeffs[i]);
  }
  return std::sqrt(acc);
}

double sobolev_norm(const SpectralField& f, double s) {
  return sobolev_norm(f.coeffs(), f.grid(), s);
}

double mass(std::span<const cplx> coeffs) {
  double acc = 0.0;
  for (const auto& c : coeffs) acc += std::norm(c);
  return acc;
}

SpectralField project_away(const SpectralField& f, std::span<const int> ell) {
  const Grid& g = f.grid();
  if (!g.contains(ell)) throw std::invalid_argument("project_away: ell outside grid");
  std::vector<cplx> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == g.zero_index()) continue;
    out[i] = f[g.shifted(i, ell, +1)];
  }
  return SpectralField(g, std::move(out));
}

double orbital_distance(std::span<const cplx> coeffs, const Grid& grid,
                        std::span<const int> ell, double s) {
  if (coeffs.size() != grid.size())
    throw std::invalid_argument("orbital_distance: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i == grid.zero_index()) continue;
    acc += sobolev_weight(norm2(grid.mode_at(i)), s) *
           std::norm(coeffs[grid.shifted(i, ell, +1)]);
  }
  return std::sqrt(acc);
}

SpectralField plane_wave(const Grid& grid, const PlaneWaveSpec& wave, double t) {
  if (!grid.contains(wave.ell))
    throw std::invalid_argument("plane_wave: ell outside grid");
  std::vector<cplx> c(grid.size());
  c[grid.flat_index(wave.ell)] = std::polar(wave.rho, -wave.omega() * t);
  return SpectralField(grid, std::move(c));
}

}  // namespace ssfm
