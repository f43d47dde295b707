#include "ssfm/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace ssfm {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct FourierTransform::Plans {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  double scale = 1.0;
};

FourierTransform::FourierTransform(const Grid& grid)
    : grid_(grid), perm_(grid.size()), plans_(std::make_unique<Plans>()) {
  const int d = grid.d();
  const int n = grid.points_per_axis();
  const int K = grid.K();
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    std::size_t rem = flat;
    std::size_t p_flat = 0;
    std::size_t stride = 1;
    for (int a = d - 1; a >= 0; --a) {
      const std::size_t s = rem % n;  // j + K
      rem /= n;
      const std::size_t p = (s + K) % n;  // j mod 2K
      p_flat += p * stride;
      stride *= n;
    }
    perm_[flat] = p_flat;
  }

  std::vector<int> dims(d, n);
  plans_->scale = 1.0 / static_cast<double>(grid.size());
  std::lock_guard<std::mutex> lock(planner_mutex());
  plans_->in = fftw_alloc_complex(grid.size());
  plans_->out = fftw_alloc_complex(grid.size());
  if (!plans_->in || !plans_->out) throw std::bad_alloc();
  plans_->forward = fftw_plan_dft(d, dims.data(), plans_->in, plans_->out,
                                  FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->backward = fftw_plan_dft(d, dims.data(), plans_->in, plans_->out,
                                   FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!plans_->forward || !plans_->backward)
    throw std::runtime_error("fftw: plan creation failed");
}

FourierTransform::~FourierTransform() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->backward) fftw_destroy_plan(plans_->backward);
  fftw_free(plans_->in);
  fftw_free(plans_->out);
}

void FourierTransform::to_values(std::span<const cplx> coeffs,
                                 std::span<cplx> values) {
  const std::size_t n = grid_.size();
  if (coeffs.size() != n || values.size() != n)
    throw std::invalid_argument("transform: size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    plans_->in[perm_[i]][0] = coeffs[i].real();
    plans_->in[perm_[i]][1] = coeffs[i].imag();
  }
  fftw_execute(plans_->backward);
  for (std::size_t i = 0; i < n; ++i)
    values[i] = cplx(plans_->out[perm_[i]][0], plans_->out[perm_[i]][1]);
}

void FourierTransform::to_coeffs(std::span<const cplx> values,
                                 std::span<cplx> coeffs) {
  const std::size_t n = grid_.size();
  if (coeffs.size() != n || values.size() != n)
    throw std::invalid_argument("transform: size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    plans_->in[perm_[i]][0] = values[i].real();
    plans_->in[perm_[i]][1] = values[i].imag();
  }
  fftw_execute(plans_->forward);
  const double scale = plans_->scale;
  for (std::size_t i = 0; i < n; ++i)
    coeffs[i] = cplx(plans_->out[perm_[i]][0] * scale,
                     plans_->out[perm_[i]][1] * scale);
}

FourierTransform& thread_transform(const Grid& grid) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<FourierTransform>>
      cache;
  auto& slot = cache[{grid.K(), grid.d()}];
  if (!slot) slot = std::make_unique<FourierTransform>(grid);
  return *slot;
}

}  // namespace ssfm
