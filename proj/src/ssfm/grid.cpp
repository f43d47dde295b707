#include "ssfm/grid.hpp"

#include <limits>

namespace ssfm {

long long norm2(std::span<const int> j) {
  long long s = 0;
  for (int c : j) s += static_cast<long long>(c) * c;
  return s;
}

Grid::Grid(int K, int d) : K_(K), d_(d), size_(1), zero_(0) {
  if (K < 1) throw std::invalid_argument("grid: K must be >= 1");
  if (d < 1) throw std::invalid_argument("grid: d must be >= 1");
  const std::size_t n = 2 * static_cast<std::size_t>(K);
  for (int a = 0; a < d; ++a) {
    if (size_ > std::numeric_limits<std::size_t>::max() / n / 16)
      throw std::invalid_argument("grid: too many modes");
    size_ *= n;
  }
  Mode z(d, 0);
  zero_ = flat_index(z);
}

Mode Grid::mode_at(std::size_t flat) const {
  Mode j(d_);
  const std::size_t n = points_per_axis();
  for (int a = d_ - 1; a >= 0; --a) {
    j[a] = static_cast<int>(flat % n) - K_;
    flat /= n;
  }
  return j;
}

std::size_t Grid::flat_index(std::span<const int> j) const {
  if (static_cast<int>(j.size()) != d_)
    throw std::invalid_argument("grid: mode dimension mismatch");
  std::size_t flat = 0;
  const std::size_t n = points_per_axis();
  for (int a = 0; a < d_; ++a) {
    const int r = reduce(static_cast<long long>(j[a]));
    flat = flat * n + static_cast<std::size_t>(r + K_);
  }
  return flat;
}

int Grid::reduce(long long v) const {
  const long long n = 2LL * K_;
  long long r = (v + K_) % n;
  if (r < 0) r += n;
  return static_cast<int>(r - K_);
}

Mode Grid::reduce(std::span<const long long> v) const {
  if (static_cast<int>(v.size()) != d_)
    throw std::invalid_argument("grid: mode dimension mismatch");
  Mode r(d_);
  for (int a = 0; a < d_; ++a) r[a] = reduce(v[a]);
  return r;
}

Mode Grid::reduce(std::span<const int> v) const {
  if (static_cast<int>(v.size()) != d_)
    throw std::invalid_argument("grid: mode dimension mismatch");
  Mode r(d_);
  for (int a = 0; a < d_; ++a) r[a] = reduce(static_cast<long long>(v[a]));
  return r;
}

std::size_t Grid::shifted(std::size_t a_flat, std::span<const int> b,
                          int sign) const {
  Mode a = mode_at(a_flat);
  for (int k = 0; k < d_; ++k) a[k] = reduce(static_cast<long long>(a[k]) + sign * b[k]);
  return flat_index(a);
}

std::size_t Grid::negated(std::size_t flat) const {
  Mode j = mode_at(flat);
  for (int& c : j) c = reduce(-static_cast<long long>(c));
  return flat_index(j);
}

bool Grid::contains(std::span<const int> j) const {
  if (static_cast<int>(j.size()) != d_) return false;
  for (int c : j)
    if (c < -K_ || c > K_ - 1) return false;
  return true;
}

Mode mod_reduce(std::span<const long long> v, const Grid& grid) {
  return grid.reduce(v);
}

std::string mode_to_string(std::span<const int> j) {
  std::string s;
  for (std::size_t a = 0; a < j.size(); ++a) {
    if (a) s += ':';
    s += std::to_string(j[a]);
  }
  return s;
}

}  // namespace ssfm
