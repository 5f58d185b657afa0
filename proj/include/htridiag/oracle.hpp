#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "htridiag/band.hpp"
#include "htridiag/recurrence.hpp"
#include "htridiag/types.hpp"

namespace htridiag::oracle {

/// Outcome of checking a coefficient vector against a dense truncation.
struct ResidualReport {
  double interior_residual = 0.0;  // max |(Mv - Ev)_l| / max(1, sup|v|) over the interior
  double tail_mass = 0.0;          // l2 mass of the boundary-affected entries
  bool pass = false;
};

struct SpectrumEstimate {
  std::vector<cplx> eigenvalues;          // sorted by (re, im)
  double departure_from_normality = 0.0;  // max-entry norm of M M^dag - M^dag M
  std::string condition_note;             // set when the truncation is non-normal
};

struct InverseIterationResult {
  std::vector<cplx> vector;  // sup-normalized, largest entry exactly 1
  cplx refined_energy;
};

/// All eigenvalues of a dense complex matrix via Householder reduction to
/// Hessenberg form followed by implicitly shifted QR with Wilkinson shifts.
SpectrumEstimate dense_eigenvalues(const TruncatedMatrix& m);

/// Evaluate a packet's full coefficient vector against (M - E I) on the
/// interior window of M.
ResidualReport residual_check(const TruncatedMatrix& m, cplx energy,
                              const EigenPacket& packet, double tol);

/// Fixed-shift inverse iteration with a simultaneously iterated left vector;
/// the refinement is the two-sided Rayleigh quotient.
InverseIterationResult inverse_iteration(const TruncatedMatrix& m, cplx energy_guess,
                                         std::size_t iters);

/// Max deviation of sum_k conj(right_n[k]) left_m[k] from the identity.
double gram_check(const std::vector<std::vector<cplx>>& rights,
                  const std::vector<std::vector<cplx>>& lefts);

/// Smallest singular value, estimated by inverse power iteration on the
/// normal equations through an LU factorization.
double min_singular_value(const TruncatedMatrix& m);

/// Dense inverse through partial-pivoting LU.
TruncatedMatrix invert(const TruncatedMatrix& m);

/// Rotate a vector so its largest-modulus entry is real and positive.
std::vector<cplx> align_phase(const std::vector<cplx>& v);

}  // namespace htridiag::oracle
