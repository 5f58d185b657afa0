#pragma once

#include <cstddef>

#include "htridiag/band.hpp"
#include "htridiag/types.hpp"

namespace htridiag {

/// Factor pair H = Y^dag X written through four coefficient sequences:
///   X phi_n = c_n phi_n + d_n phi_{n-h},
///   Y psi_n = c'_n psi_n + d'_n psi_{n-h}.
/// The lowering parts never act below index 0; d_0 = d'_0 = 0 is required.
struct FactorizationSpec {
  FactorizationSpec(std::size_t h, ComplexSeq c, ComplexSeq cp, ComplexSeq d, ComplexSeq dp)
      : h(h), c(std::move(c)), cp(std::move(cp)), d(std::move(d)), dp(std::move(dp)) {
    if (h < 1) throw InvalidParameterError("FactorizationSpec: h must be >= 1");
  }

  std::size_t h;
  ComplexSeq c;   // diagonal part of X
  ComplexSeq cp;  // diagonal part of Y
  ComplexSeq d;   // lowering part of X
  ComplexSeq dp;  // lowering part of Y
};

/// Mixing coefficients for C = alpha X + beta Y^dag, D = gamma X + delta Y^dag.
struct CombinationCoeffs {
  CombinationCoeffs(cplx alpha, cplx beta, cplx gamma, cplx delta)
      : alpha(alpha), beta(beta), gamma(gamma), delta(delta) {
    if (std::abs(determinant()) <= 1e-14)
      throw InvalidParameterError("CombinationCoeffs: alpha*delta - beta*gamma must not vanish");
  }

  cplx determinant() const { return alpha * delta - beta * gamma; }

  cplx alpha, beta, gamma, delta;
};

/// Scalar coefficients expressing H through the mixed pair:
///   H = c2 C^2 + d2 D^2 + cd C D + id 1.
struct QuadraticForm {
  cplx c2, d2, cd, id;
};

struct PseudoBosonReport {
  bool constant_c = true;        // c_n == c_0 on the tested span
  bool constant_cp = true;       // c'_n == c'_0 on the tested span
  bool ladder_weights = true;    // d_n conj(d'_n) == n / (alpha delta - beta gamma)
  double max_residual = 0.0;
  bool pass = false;             // [C, D] phi_n = phi_n holds on the tested span
};

/// Factorial-product rescaling that brings a pure lowering factor to
/// canonical form X phihat_n = sqrt(n) phihat_{n-1}.
struct RescaleResult {
  ComplexSeq scale_phi;  // sqrt(n!) / d_n!
  ComplexSeq scale_psi;  // sqrt(n!) / d'_n!
  ComplexSeq pairing;    // n! / (d_n! d'_n!)
};

/// Band of H = Y^dag X.
BandSpec compose_band(const FactorizationSpec& f);

/// Band of the partner H_susy = X Y^dag.
BandSpec susy_band(const FactorizationSpec& f);

/// Band of the commutator [X, Y^dag].
BandSpec commutator_band(const FactorizationSpec& f);

/// Recover a factorization of a band under the gauge c = gauge_c. The
/// remaining sequences follow by forward recursion; for h > 1 the lowering
/// seeds d_j, d'_j with 0 < j < h are gauged to zero. Solved eagerly up to
/// n_max and extended lazily past it.
FactorizationSpec solve_factorization(const BandSpec& band, const ComplexSeq& gauge_c,
                                      std::size_t n_max);

/// Remark-style rescaling; requires c = 0 (pure lowering X) and h = 1.
RescaleResult rescale_factorization(const FactorizationSpec& f, std::size_t n_max);

/// Check whether the mixed pair (C, D) satisfies [C, D] phi_n = phi_n on
/// indices <= n_max.
PseudoBosonReport check_pseudoboson_combination(const FactorizationSpec& f,
                                                const CombinationCoeffs& mix,
                                                std::size_t n_max, double tol = 1e-12);

/// Express H through C and D; requires the pseudo-boson conditions to hold on
/// the working range.
QuadraticForm compose_quadratic(const FactorizationSpec& f, const CombinationCoeffs& mix,
                                std::size_t check_n_max = 64);

/// Dense truncations of the factor operators.
TruncatedMatrix x_matrix(const FactorizationSpec& f, std::size_t n);
TruncatedMatrix y_dagger_matrix(const FactorizationSpec& f, std::size_t n);

/// Dense truncations of the mixed pair C, D.
TruncatedMatrix combination_c_matrix(const FactorizationSpec& f, const CombinationCoeffs& mix,
                                     std::size_t n);
TruncatedMatrix combination_d_matrix(const FactorizationSpec& f, const CombinationCoeffs& mix,
                                     std::size_t n);

/// Evaluate a quadratic form on dense truncations of C and D.
TruncatedMatrix evaluate_quadratic(const QuadraticForm& q, const TruncatedMatrix& c_mat,
                                   const TruncatedMatrix& d_mat);

}  // namespace htridiag
