#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssfm/spectral_field.hpp"
#include "ssfm/stability.hpp"

namespace ssfm {

class TransformError : public std::runtime_error {
 public:
  enum class Kind { NotLinearlyStable, DegenerateSign, ZeroCarrierMode, MassDeficit };
  TransformError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Row-major 2x2 complex matrix.
using Mat2 = std::array<cplx, 4>;

Mat2 mat_mul(const Mat2& a, const Mat2& b);
cplx mat_det(const Mat2& a);

/// Symplectic change of variables (xi_j, conj xi_{-j}) = S_j (w_j, conj w_{-j})
/// that diagonalises the linear part of mode j.
struct Diagonalizer {
  Mode j;
  long long n = 0;
  long long shift = 0;
  cplx alpha;
  cplx beta;
  cplx lambda_plus;
  cplx lambda_minus;
  double omega = 0.0;
  Mat2 S{};
  Mat2 S_inv{};
  bool degenerate = false;  // rho = 0: S = identity
};

class DiagonalizerSet {
 public:
  const LinearizationParams& params() const { return params_; }
  const Grid& grid() const { return params_.grid; }

  /// Indexed by flat grid index; the zero slot is unused.
  const Diagonalizer& at(std::size_t flat) const { return blocks_[flat]; }
  std::size_t size() const { return blocks_.size(); }

  bool degenerate_coupling() const { return degenerate_; }
  /// Largest |entry| over all S_j and S_j^{-1}.
  double max_entry_modulus() const;

  /// e^{-i shift h} A_j, the per-mode linearised propagation block.
  Mat2 propagation_block(std::size_t flat) const;

 private:
  friend DiagonalizerSet build_diagonalizers(const LinearizationParams& p);
  LinearizationParams params_;
  std::vector<Diagonalizer> blocks_;
  bool degenerate_ = false;
};

/// Requires linear stability at every mode (positive normaliser).
DiagonalizerSet build_diagonalizers(const LinearizationParams& p);

/// sqrt(1 + rho^2 / (2 sqrt(c1))): bound on the entries of S_j and S_j^{-1}.
double diagonalizer_entry_bound(double rho, double c1);

/// Constants (c_hat, C_hat) with c_hat ||xi||_s <= ||F_{not ell} u||_s <= C_hat ||xi||_s,
/// from the entry bound b: C_hat = b + sqrt(b^2 - 1), c_hat = 1 / C_hat.
std::pair<double, double> norm_equivalence_constants(double entry_bound);

struct XiField {
  LinearizationParams params;
  std::vector<cplx> xi;  // flat grid order, zero slot = 0
  double theta = 0.0;    // argument of the carrier coefficient
  double a = 0.0;        // modulus of the carrier coefficient
};

/// u -> v (shift by ell) -> (a, theta, w) -> xi.
XiField u_to_xi(const SpectralField& u, const DiagonalizerSet& diag);

/// Inverse chain; the carrier modulus is rebuilt from mass conservation,
/// a = sqrt(rho^2 - sum |w_j|^2).
SpectralField xi_to_u(const XiField& xi, const DiagonalizerSet& diag);

/// (sum_{j != 0} |j|^{2s} |xi_j|^2)^{1/2}.
double xi_norm(const XiField& xi, double s);

}  // namespace ssfm
