#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "htridiag/types.hpp"

namespace htridiag {

/// An h-banded operator given by its three coefficient sequences:
///   <psi_n, H phi_m> = b_n d(n,m+h) + a_n d(n,m) + bp_n d(n,m-h).
/// Coefficients at negative indices are treated as zero by every consumer;
/// in particular b_j never enters a formula for j < h.
struct BandSpec {
  BandSpec(std::size_t h, ComplexSeq a, ComplexSeq b, ComplexSeq bp)
      : h(h), a(std::move(a)), b(std::move(b)), bp(std::move(bp)) {
    if (h < 1) throw InvalidParameterError("BandSpec: band offset h must be >= 1");
  }

  std::size_t h;
  ComplexSeq a;   // diagonal a_n
  ComplexSeq b;   // lower band b_n (row n, column n-h)
  ComplexSeq bp;  // upper band b'_n (row n, column n+h)
};

/// Dense N x N realization of a band (or a derived product). Rows inside
/// [interior_lo, interior_hi] are free of truncation artifacts.
class TruncatedMatrix {
 public:
  explicit TruncatedMatrix(std::size_t dim)
      : dim_(dim), interior_lo_(0), interior_hi_(dim == 0 ? 0 : dim - 1),
        data_(dim * dim, cplx(0.0, 0.0)) {
    if (dim == 0) throw DimensionError("TruncatedMatrix: dimension must be positive");
  }

  std::size_t dim() const { return dim_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  cplx operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  std::size_t interior_lo() const { return interior_lo_; }
  std::size_t interior_hi() const { return interior_hi_; }

  void set_interior(std::size_t lo, std::size_t hi) {
    if (hi >= dim_ || lo > hi)
      throw DimensionError("TruncatedMatrix: invalid interior window");
    interior_lo_ = lo;
    interior_hi_ = hi;
  }

 private:
  std::size_t dim_;
  std::size_t interior_lo_;
  std::size_t interior_hi_;
  std::vector<cplx> data_;
};

/// Bounded invertible change of basis with its inverse stored up front.
struct RieszMap {
  RieszMap(TruncatedMatrix R, TruncatedMatrix Rinv, double check_tol = 1e-10);

  std::size_t dim() const { return R.dim(); }

  TruncatedMatrix R;
  TruncatedMatrix Rinv;
};

/// Result of applying a band to a coefficient vector. Entries with index
/// >= boundary_start are affected by the truncation of the band.
struct BandApplyResult {
  std::vector<cplx> values;
  std::size_t boundary_start;
};

/// Self-adjointness report for an h=1 band over indices <= n_max.
struct SymmetryReport {
  bool diagonal_real = true;        // |Im a_n| <= tol for all tested n
  bool band_conjugate = true;       // b_m == conj(b'_{m-1}) for all tested m
  double max_imag_a = 0.0;
  double max_band_deviation = 0.0;
  bool self_adjoint = false;        // both conditions hold on the tested span
};

/// Mixed matrix element <psi_n, H phi_m>.
cplx matrix_element(const BandSpec& spec, std::size_t n, std::size_t m);

/// Coefficients of H(sum_k coeffs_k phi_k); out-of-range coefficients are
/// treated as zero.
BandApplyResult apply_band(const BandSpec& spec, std::span<const cplx> coeffs);

/// Band of the adjoint operator acting on the dual family. The truncation of
/// the result is the conjugate transpose of the truncation of the input.
BandSpec adjoint_band(const BandSpec& spec);

/// Dense N x N truncation; rejects N <= h rather than degrading to a diagonal.
TruncatedMatrix truncate(const BandSpec& spec, std::size_t n);

/// Smallest h >= 1 with all entries off the {0, h} offsets below tol in
/// modulus; nullopt if no h < dim qualifies. Diagonal matrices report h = 1.
std::optional<std::size_t> classify_h_tridiagonal(const TruncatedMatrix& m, double tol);

/// Rinv * M * R; exact only on the interior window when R is not banded.
TruncatedMatrix riesz_conjugate(const TruncatedMatrix& m, const RieszMap& riesz);

/// Lemma-style self-adjointness test on the span of the first n_max indices.
SymmetryReport symmetry_check(const BandSpec& spec, std::size_t n_max, double tol = 1e-12);

// Dense helpers shared by the factorization and oracle layers.
TruncatedMatrix identity_matrix(std::size_t n);
TruncatedMatrix multiply(const TruncatedMatrix& a, const TruncatedMatrix& b);
TruncatedMatrix subtract(const TruncatedMatrix& a, const TruncatedMatrix& b);
TruncatedMatrix conjugate_transpose(const TruncatedMatrix& m);
std::vector<cplx> matvec(const TruncatedMatrix& m, std::span<const cplx> v);
double max_abs(const TruncatedMatrix& m);
double max_abs_diff(const TruncatedMatrix& a, const TruncatedMatrix& b);

}  // namespace htridiag
