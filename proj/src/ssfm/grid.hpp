#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssfm {

/// Integer mode vector j = (j_1, ..., j_d).
using Mode = std::vector<int>;

/// Squared Euclidean length |j|^2.
long long norm2(std::span<const int> j);

/// Fourier grid with modes {-K, ..., K-1}^d and collocation points x = pi*j/K.
///
/// Modes (and collocation points) are stored in lexicographic order of the
/// shifted index j+K per axis, last axis fastest.
class Grid {
 public:
  Grid(int K, int d);

  int K() const { return K_; }
  int d() const { return d_; }
  int points_per_axis() const { return 2 * K_; }
  std::size_t size() const { return size_; }

  Mode mode_at(std::size_t flat) const;
  std::size_t flat_index(std::span<const int> j) const;
  std::size_t zero_index() const { return zero_; }

  /// Entrywise reduction modulo 2K into {-K, ..., K-1}.
  Mode reduce(std::span<const long long> v) const;
  Mode reduce(std::span<const int> v) const;
  int reduce(long long v) const;

  /// Flat index of reduce(a + sign*b).
  std::size_t shifted(std::size_t a_flat, std::span<const int> b, int sign) const;

  /// Flat index of reduce(-j).
  std::size_t negated(std::size_t flat) const;

  bool contains(std::span<const int> j) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.K_ == b.K_ && a.d_ == b.d_;
  }

 private:
  int K_;
  int d_;
  std::size_t size_;
  std::size_t zero_;
};

/// Free-function form of Grid::reduce.
Mode mod_reduce(std::span<const long long> v, const Grid& grid);

std::string mode_to_string(std::span<const int> j);

}  // namespace ssfm
