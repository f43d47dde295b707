#include "ssfm/random.hpp"

#include <cmath>
#include <numbers>

namespace ssfm {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// Uniform in (0, 1] from 53 bits.
double unit_open_closed(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Counter Philox4x32::operator()(Counter ctr) const {
  Key key = key_;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, ctr[0], hi0, lo0);
    mulhilo(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::array<double, 2> gaussian_pair(const Philox4x32& gen, std::uint64_t stream,
                                    std::uint64_t draw) {
  const auto r = gen({static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32),
                      static_cast<std::uint32_t>(draw),
                      static_cast<std::uint32_t>(draw >> 32)});
  const double u1 = unit_open_closed(r[0], r[1]);
  const double u2 = unit_open_closed(r[2], r[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

SpectralField random_initial_datum(const DatumSpec& spec) {
  const Grid& g = spec.grid;
  if (!g.contains(spec.ell)) throw std::invalid_argument("datum: ell outside grid");
  if (!(spec.rho >= 0.0) || !(spec.epsilon >= 0.0) || !(spec.s >= 0.0))
    throw std::invalid_argument("datum: rho, epsilon, s must be >= 0");

  // Perturbation in shifted variables: w_j sits at u_{ell+j}.
  std::vector<cplx> w(g.size());
  if (spec.epsilon > 0.0) {
    const Philox4x32 gen(spec.seed);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (i == g.zero_index()) continue;
      const auto z = gaussian_pair(gen, i, 0);
      const double damp = std::pow(static_cast<double>(norm2(g.mode_at(i))),
                                   -(spec.s + 1.0) / 2.0);
      w[i] = cplx(z[0], z[1]) * damp;
    }
    const double scale = spec.epsilon / sobolev_norm(w, g, spec.s);
    for (auto& c : w) c *= scale;
  }
  const double pert_mass = mass(w);
  const double radicand = spec.rho * spec.rho - pert_mass;
  if (radicand < 0.0)
    throw MassDeficitError("datum: perturbation mass " + std::to_string(pert_mass) +
                           " exceeds rho^2 = " + std::to_string(spec.rho * spec.rho));

  std::vector<cplx> u(g.size());
  u[g.flat_index(spec.ell)] = std::sqrt(radicand);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == g.zero_index()) continue;
    u[g.shifted(i, spec.ell, +1)] = w[i];
  }
  return SpectralField(g, std::move(u));
}

}  // namespace ssfm
