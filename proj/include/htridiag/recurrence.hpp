#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "htridiag/band.hpp"
#include "htridiag/types.hpp"

namespace htridiag {

enum class OperatorSide { H, HDagger, HSusy, HSusyDagger };

std::string to_string(OperatorSide side);
OperatorSide side_from_string(const std::string& name);

/// Eigenvector coefficient sequence produced by an h-step three-term
/// recurrence, normalized so that p[0] = 1 (and p[l] = 0 for 0 < l < h).
/// The full coefficients are c0 * p.
struct EigenPacket {
  cplx energy;
  OperatorSide side = OperatorSide::H;
  std::vector<cplx> p;
  cplx c0{1.0, 0.0};
  std::size_t size() const { return p.size(); }

  std::vector<cplx> coefficients() const {
    std::vector<cplx> out(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) out[k] = c0 * p[k];
    return out;
  }
};

struct NormalizationRecord {
  cplx pairing;              // pairing sum after (re)scaling
  std::string scale_choice;  // how the residual freedom was fixed
  double tail_estimate = 0.0;
};

struct NormalizedPair {
  EigenPacket right;
  EigenPacket left;
  NormalizationRecord record;
};

/// Right eigenvector coefficients of H at energy E: p_{l+h} is determined by
/// row l of the eigenvalue relation. A vanishing divisor is tolerated when
/// the numerator is exactly zero (the minimal solution continues with zeros);
/// otherwise it is reported as a zero pivot.
EigenPacket run_recurrence_right(const BandSpec& band, cplx energy, std::size_t n);

/// Left (adjoint-side) coefficients q with q_l = conj of the mirrored run;
/// when b_l = b'_{l-h} for all l the output is exactly conj of the right run.
EigenPacket run_recurrence_left(const BandSpec& band, cplx energy, std::size_t n);

/// Same recurrences on a partner band (A, B, B').
EigenPacket run_recurrence_susy(const BandSpec& susy, cplx energy, std::size_t n,
                                bool left_side);

/// Rescale c0 on both packets so the truncated pairing sum equals one. The
/// residual freedom is fixed by making the left scale real and positive; if
/// the incoming scales already pair to one within tol they are kept.
NormalizedPair normalize_pair(const EigenPacket& right, const EigenPacket& left, double tol);

/// Truncated pairing sum_k conj(c0_r p_k) (c0_l q_k) with a tail estimate.
std::pair<cplx, double> pairing_sum(const EigenPacket& right, const EigenPacket& left);

/// Gram-style matrix G(n, m) = sum_k conj(c_k^(n)) d_k^(m) over full
/// coefficients; near the identity for normalized packets.
std::vector<std::vector<cplx>> biorthogonality_matrix(const std::vector<EigenPacket>& rights,
                                                      const std::vector<EigenPacket>& lefts);

/// Index-sum counterpart: sum over packets n of conj(c_k^(n)) d_l^(n).
cplx index_pairing_sum(const std::vector<EigenPacket>& rights,
                       const std::vector<EigenPacket>& lefts, std::size_t k, std::size_t l);

}  // namespace htridiag
