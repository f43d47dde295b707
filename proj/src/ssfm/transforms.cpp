#include "ssfm/transforms.hpp"

#include <algorithm>
#include <cmath>

namespace ssfm {

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

cplx mat_det(const Mat2& a) { return a[0] * a[3] - a[1] * a[2]; }

double DiagonalizerSet::max_entry_modulus() const {
  double m = 0.0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i == grid().zero_index()) continue;
    for (const auto& z : blocks_[i].S) m = std::max(m, std::abs(z));
    for (const auto& z : blocks_[i].S_inv) m = std::max(m, std::abs(z));
  }
  return m;
}

Mat2 DiagonalizerSet::propagation_block(std::size_t flat) const {
  const Diagonalizer& b = blocks_[flat];
  const cplx ph = std::polar(1.0, -static_cast<double>(b.shift) * params_.h);
  return {ph * b.alpha, ph * b.beta, ph * std::conj(b.beta), ph * std::conj(b.alpha)};
}

DiagonalizerSet build_diagonalizers(const LinearizationParams& p) {
  if (!(p.h > 0.0)) throw std::invalid_argument("diagonalizers: h must be > 0");
  DiagonalizerSet set;
  set.params_ = p;
  const Grid& g = p.grid;
  set.blocks_.resize(g.size());
  set.degenerate_ = p.rho == 0.0;

  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == g.zero_index()) continue;
    Diagonalizer& b = set.blocks_[i];
    b.j = g.mode_at(i);
    b.n = n_of_j(b.j, p.ell, g);
    b.shift = shift_of_j(b.j, p.ell, g);
    const ModeMatrix mm = mode_matrix(b.j, p);
    b.alpha = mm.alpha;
    b.beta = mm.beta;

    const double re = b.alpha.real();
    if (std::abs(re) > 1.0)
      throw TransformError(TransformError::Kind::NotLinearlyStable,
                           "mode " + mode_to_string(b.j) + " is linearly unstable");
    const double im = b.alpha.imag();
    if (im == 0.0)
      throw TransformError(TransformError::Kind::DegenerateSign,
                           "mode " + mode_to_string(b.j) + ": Im(alpha) = 0");
    const double sg = im > 0.0 ? 1.0 : -1.0;
    const double root = std::sqrt((1.0 - re) * (1.0 + re));
    b.lambda_plus = cplx(re, sg * root);
    b.lambda_minus = cplx(re, -sg * root);
    b.omega = static_cast<double>(b.shift) + std::acos(re) / (-p.h * sg);

    if (set.degenerate_) {
      b.degenerate = true;
      b.S = {1.0, 0.0, 0.0, 1.0};
      b.S_inv = b.S;
      continue;
    }
    // lambda_plus - alpha = -i sg delta without cancellation, using
    // |Im alpha|^2 = 1 - Re alpha^2 + |beta|^2.
    const double delta = std::norm(b.beta) / (std::abs(im) + root);
    const double norm_sq = std::norm(b.beta) - delta * delta;
    if (!(norm_sq > 0.0))
      throw TransformError(TransformError::Kind::NotLinearlyStable,
                           "mode " + mode_to_string(b.j) +
                               ": diagonaliser normaliser is not positive");
    const double inv = 1.0 / std::sqrt(norm_sq);
    // S^{-1} = [[p, q], [conj q, conj p]], det = 1, so S = [[conj p, -q], [-conj q, p]].
    const cplx pp = b.beta * inv;
    const cplx qq = cplx(0.0, sg * delta * inv);
    b.S_inv = {pp, qq, std::conj(qq), std::conj(b.beta) * inv};
    b.S = {std::conj(pp), -qq, -std::conj(qq), pp};
  }
  return set;
}

double diagonalizer_entry_bound(double rho, double c1) {
  if (!(c1 > 0.0)) throw std::invalid_argument("entry bound: c1 must be > 0");
  return std::sqrt(1.0 + rho * rho / (2.0 * std::sqrt(c1)));
}

std::pair<double, double> norm_equivalence_constants(double entry_bound) {
  const double b = std::max(1.0, entry_bound);
  const double upper = b + std::sqrt(b * b - 1.0);
  return {1.0 / upper, upper};
}

XiField u_to_xi(const SpectralField& u, const DiagonalizerSet& diag) {
  const LinearizationParams& p = diag.params();
  const Grid& g = p.grid;
  if (!(u.grid() == g)) throw std::invalid_argument("u_to_xi: grid mismatch");

  XiField out;
  out.params = p;
  const cplx carrier = u[g.flat_index(p.ell)];
  if (carrier == cplx(0.0, 0.0))
    throw TransformError(TransformError::Kind::ZeroCarrierMode,
                         "u_to_xi: carrier coefficient at ell is zero");
  out.a = std::abs(carrier);
  out.theta = std::arg(carrier);
  const cplx unphase = std::polar(1.0, -out.theta);

  std::vector<cplx> w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == g.zero_index()) continue;
    w[i] = u[g.shifted(i, p.ell, +1)] * unphase;
  }
  out.xi.assign(g.size(), cplx(0.0, 0.0));
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == g.zero_index()) continue;
    const Mat2& S = diag.at(i).S;
    out.xi[i] = S[0] * w[i] + S[1] * std::conj(w[g.negated(i)]);
  }
  return out;
}

SpectralField xi_to_u(const XiField& xi, const DiagonalizerSet& diag) {
  const LinearizationParams& p = diag.params();
  const Grid& g = p.grid;
  if (xi.xi.size() != g.size()) throw std::invalid_argument("xi_to_u: size mismatch");

  std::vector<cplx> w(g.size());
  double wmass = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == g.zero_index()) continue;
    const Mat2& Si = diag.at(i).S_inv;
    w[i] = Si[0] * xi.xi[i] + Si[1] * std::conj(xi.xi[g.negated(i)]);
    wmass += std::norm(w[i]);
  }
  const double radicand = p.rho * p.rho - wmass;
  if (radicand < 0.0)
    throw TransformError(TransformError::Kind::MassDeficit,
                         "xi_to_u: rho^2 - sum |w_j|^2 = " + std::to_string(radicand) +
                             " < 0");
  const double a = std::sqrt(radicand);
  const cplx phase = std::polar(1.0, xi.theta);

  std::vector<cplx> u(g.size());
  u[g.flat_index(p.ell)] = a * phase;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == g.zero_index()) continue;
    u[g.shifted(i, p.ell, +1)] = w[i] * phase;
  }
  return SpectralField(g, std::move(u));
}

double xi_norm(const XiField& xi, double s) {
  const Grid& g = xi.params.grid;
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == g.zero_index()) continue;
    acc += sobolev_weight(norm2(g.mode_at(i)), s) * std::norm(xi.xi[i]);
  }
  return std::sqrt(acc);
}

}  // namespace ssfm
