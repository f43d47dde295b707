#include "ssfm/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ssfm {

namespace {

void validate(const LinearizationParams& p) {
  if (!p.grid.contains(p.ell))
    throw std::invalid_argument("ell " + mode_to_string(p.ell) + " outside grid");
  if (p.lambda != 1 && p.lambda != -1)
    throw std::invalid_argument("lambda must be +1 or -1");
  if (!(p.rho >= 0.0)) throw std::invalid_argument("rho must be >= 0");
}

struct PairNorms {
  long long plus;   // |ell+j mod 2K|^2
  long long minus;  // |ell-j mod 2K|^2
};

PairNorms pair_norms(std::span<const int> j, std::span<const int> ell,
                     const Grid& grid) {
  if (j.size() != ell.size() || static_cast<int>(j.size()) != grid.d())
    throw std::invalid_argument("mode dimension mismatch");
  Mode jr = grid.reduce(j);
  bool zero = true;
  for (int c : jr) zero = zero && c == 0;
  if (zero) throw StabilityError(StabilityError::Kind::ZeroMode, "n(j) undefined for j = 0");
  std::vector<long long> a(j.size()), b(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    a[k] = static_cast<long long>(ell[k]) + jr[k];
    b[k] = static_cast<long long>(ell[k]) - jr[k];
  }
  return {norm2(grid.reduce(a)), norm2(grid.reduce(b))};
}

// cos(n h) - h lambda rho^2 sin(n h) and sin(n h) + h lambda rho^2 cos(n h).
struct Trig {
  double re_alpha;
  double sign_arg;
};

Trig trig(long long n, const LinearizationParams& p) {
  const double nh = static_cast<double>(n) * p.h;
  const double e = p.h * p.lambda * p.rho * p.rho;
  return {std::cos(nh) - e * std::sin(nh), std::sin(nh) + e * std::cos(nh)};
}

double omega_from(long long n, long long shift, const LinearizationParams& p,
                  std::span<const int> j) {
  const Trig t = trig(n, p);
  if (std::abs(t.re_alpha) > 1.0)
    throw StabilityError(StabilityError::Kind::UnstableMode,
                         "mode " + mode_to_string(j) +
                             " is linearly unstable (|Re alpha| > 1)");
  if (t.sign_arg == 0.0)
    throw StabilityError(StabilityError::Kind::DegenerateSign,
                         "mode " + mode_to_string(j) +
                             ": sin(nh) + h lambda rho^2 cos(nh) = 0");
  const double sgn = t.sign_arg > 0.0 ? 1.0 : -1.0;
  return static_cast<double>(shift) + std::acos(t.re_alpha) / (p.h * sgn);
}

// Modulus of the dominant eigenvalue: 1 on the unit circle, otherwise
// |Re alpha| + sqrt(Re alpha^2 - 1).
double growth_from(double re_alpha) {
  const double a = std::abs(re_alpha);
  if (a <= 1.0) return 1.0;
  return a + std::sqrt(a * a - 1.0);
}

}  // namespace

long long n_of_j(std::span<const int> j, std::span<const int> ell, const Grid& grid) {
  const PairNorms pn = pair_norms(j, ell, grid);
  // plus + minus is even: both vectors are congruent to ell +- j with the
  // same parity per component.
  return (pn.plus + pn.minus) / 2 - norm2(ell);
}

long long shift_of_j(std::span<const int> j, std::span<const int> ell,
                     const Grid& grid) {
  const PairNorms pn = pair_norms(j, ell, grid);
  return (pn.plus - pn.minus) / 2;
}

ModeMatrix mode_matrix(std::span<const int> j, const LinearizationParams& p) {
  validate(p);
  const long long n = n_of_j(j, p.ell, p.grid);
  const double e = p.h * p.lambda * p.rho * p.rho;
  const cplx phase = std::polar(1.0, -static_cast<double>(n) * p.h);
  return {cplx(1.0, -e) * phase, cplx(0.0, -e) * phase};
}

LinearStabilityReport check_assumption1(const LinearizationParams& p) {
  validate(p);
  if (!(p.h > 0.0)) throw std::invalid_argument("h must be > 0");
  LinearStabilityReport r;
  r.c1_certified = std::numeric_limits<double>::infinity();
  const Grid& g = p.grid;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == g.zero_index()) continue;
    const Mode j = g.mode_at(i);
    const Trig t = trig(n_of_j(j, p.ell, g), p);
    const double lhs = t.re_alpha * t.re_alpha;
    const double c1 = (1.0 - lhs) / (p.h * p.h);
    if (c1 < r.c1_certified) {
      r.c1_certified = c1;
      r.worst_j = j;
      r.worst_lhs = lhs;
    }
  }
  r.holds = r.c1_certified > 0.0;
  return r;
}

double omega(std::span<const int> j, const LinearizationParams& p) {
  validate(p);
  const PairNorms pn = pair_norms(j, p.ell, p.grid);
  const long long n = (pn.plus + pn.minus) / 2 - norm2(p.ell);
  return omega_from(n, (pn.plus - pn.minus) / 2, p, j);
}

double growth_factor(std::span<const int> j, const LinearizationParams& p) {
  validate(p);
  return growth_from(trig(n_of_j(j, p.ell, p.grid), p).re_alpha);
}

double cfl_max_h(int d, int K, double rho0, int N) {
  if (K < 1) throw std::invalid_argument("cfl_max_h: K must be >= 1");
  if (N < 2) throw std::invalid_argument("cfl_max_h: N must be >= 2");
  if (d < 1) throw std::invalid_argument("cfl_max_h: d must be >= 1");
  return std::numbers::pi /
         ((N + 1) * (static_cast<double>(d) * K * K + 2.0 * rho0 * rho0));
}

double mu(long long n, double h) {
  const double nh = static_cast<double>(n) * h;
  if (!(nh > 0.0) || nh >= std::numbers::pi / 2)
    throw StabilityError(StabilityError::Kind::DomainError,
                         "mu: n h = " + std::to_string(nh) + " outside (0, pi/2)");
  return std::tan(nh) / h;
}

double varpi(std::span<const int> j, double h, double sigma, int lambda) {
  const long long n = norm2(j);
  if (n == 0) throw StabilityError(StabilityError::Kind::ZeroMode, "varpi: j = 0");
  const double m = mu(n, h);
  const double disc = m * m + 2.0 * lambda * sigma * m;
  if (disc < 0.0)
    throw StabilityError(StabilityError::Kind::NegativeDiscriminant,
                         "varpi: mu^2 + 2 lambda sigma mu < 0 for |j|^2 = " +
                             std::to_string(n));
  return static_cast<double>(n) - m + std::sqrt(disc);
}

bool FrequencyTable::omega_complete() const {
  return std::all_of(modes.begin(), modes.end(),
                     [](const ModeFrequency& m) { return m.omega.has_value(); });
}

double FrequencyTable::max_growth() const {
  double g = 1.0;
  for (const auto& m : modes) g = std::max(g, m.growth);
  return g;
}

FrequencyTable build_frequency_table(const LinearizationParams& p) {
  validate(p);
  if (!(p.h > 0.0)) throw std::invalid_argument("h must be > 0");
  FrequencyTable t;
  t.params = p;
  const Grid& g = p.grid;
  const bool ell_zero = norm2(p.ell) == 0;
  const double sigma = p.rho * p.rho;
  t.varpi_available = ell_zero;
  if (!ell_zero) t.varpi_note = "modified frequencies are constructed for ell = 0 only";

  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == g.zero_index()) continue;
    ModeFrequency m;
    m.flat = i;
    m.j = g.mode_at(i);
    const PairNorms pn = pair_norms(m.j, p.ell, g);
    m.n = (pn.plus + pn.minus) / 2 - norm2(p.ell);
    m.shift = (pn.plus - pn.minus) / 2;
    const ModeMatrix mm = mode_matrix(m.j, p);
    m.alpha = mm.alpha;
    m.beta = mm.beta;
    m.growth = growth_from(trig(m.n, p).re_alpha);
    try {
      m.omega = omega_from(m.n, m.shift, p, m.j);
    } catch (const StabilityError& e) {
      m.omega_error = e.what();
    }
    if (ell_zero) {
      try {
        m.varpi = varpi(m.j, p.h, sigma, p.lambda);
      } catch (const StabilityError& e) {
        m.varpi_error = e.what();
        if (t.varpi_available)
          t.varpi_note = std::string("modified frequency unavailable: ") + e.what();
        t.varpi_available = false;
      }
    }
    t.modes.push_back(std::move(m));
  }

  if (t.varpi_available && t.omega_complete()) {
    double eps = 0.0;
    for (const auto& m : t.modes) eps = std::max(eps, std::abs(*m.varpi - *m.omega));
    t.eps_hat = eps;
  }
  return t;
}

}  // namespace ssfm
