#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "ssfm/grid.hpp"

namespace ssfm {

using cplx = std::complex<double>;

/// Discrete Fourier transform between collocation values and Fourier
/// coefficients on a Grid, both in the grid's shifted lexicographic order.
///
///   coeffs_j = (2K)^{-d} sum_k values_k e^{-i j.x_k},   x_k = pi k / K
///   values_k = sum_j coeffs_j e^{i j.x_k}
///
/// FFTW stores index p = j mod 2K per axis; the permutation between the two
/// orderings is applied on copy-in/copy-out. Not thread-safe per instance;
/// use one instance per thread.
class FourierTransform {
 public:
  explicit FourierTransform(const Grid& grid);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  const Grid& grid() const { return grid_; }

  void to_values(std::span<const cplx> coeffs, std::span<cplx> values);
  void to_coeffs(std::span<const cplx> values, std::span<cplx> coeffs);

 private:
  struct Plans;
  Grid grid_;
  std::vector<std::size_t> perm_;  // shifted flat index -> FFTW flat index
  std::unique_ptr<Plans> plans_;
};

/// Per-thread cached transform for the given grid.
FourierTransform& thread_transform(const Grid& grid);

}  // namespace ssfm
