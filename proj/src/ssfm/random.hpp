#pragma once

#include <array>
#include <cstdint>

#include "ssfm/spectral_field.hpp"

namespace ssfm {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(Key key) : key_(key) {}
  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  Counter operator()(Counter ctr) const;

 private:
  Key key_;
};

/// Two standard normals from one Philox block (Box-Muller).
std::array<double, 2> gaussian_pair(const Philox4x32& gen, std::uint64_t stream,
                                    std::uint64_t draw);

struct DatumSpec {
  Grid grid{16, 1};
  double rho = 0.0;
  Mode ell{0};
  double s = 5.0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
};

class MassDeficitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Carrier rho-sized plane wave plus a random perturbation: i.i.d. complex
/// Gaussians damped by |j - ell|^{-(s+1)}, rescaled so that
/// ||F_{not ell} u||_s = epsilon; the carrier is the positive real number that
/// makes ||u||_0 = rho.
SpectralField random_initial_datum(const DatumSpec& spec);

}  // namespace ssfm
