#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "htridiag/band.hpp"
#include "htridiag/factorization.hpp"
#include "htridiag/types.hpp"

namespace htridiag::models {

/// A named parameterized operator family: its band, a factorization, the
/// closed-form partner band, and (when known) the spectrum together with
/// closed-form eigenvector coefficients.
struct ModelDescriptor {
  ModelDescriptor(std::string name, std::map<std::string, cplx> params, BandSpec band,
                  FactorizationSpec factors, BandSpec susy)
      : name(std::move(name)), params(std::move(params)), band(std::move(band)),
        factors(std::move(factors)), susy(std::move(susy)) {}

  std::string name;
  std::map<std::string, cplx> params;
  BandSpec band;
  FactorizationSpec factors;
  BandSpec susy;  // closed-form partner band

  std::optional<ComplexSeq> spectrum;  // E_n when known
  std::size_t level_stride = 1;        // spacing of levels reachable by the seeded recurrence

  // Closed-form normalized coefficients p_k^(n) (right) and q_k^(n) (left)
  // for levels n < reference_levels; empty functions when unavailable.
  std::function<cplx(std::size_t, std::size_t)> reference_p;
  std::function<cplx(std::size_t, std::size_t)> reference_q;
  std::size_t reference_levels = 0;
  std::optional<cplx> reference_c0;  // recommended ground-pair scale

  std::string note;

  bool has_spectrum() const { return spectrum.has_value(); }
  bool level_supported(std::size_t level) const {
    return has_spectrum() && level % level_stride == 0;
  }
};

/// Number operator shifted by two independent complex displacements:
/// a_n = n + alpha beta, b_n = alpha sqrt(n), b'_n = beta sqrt(n+1).
ModelDescriptor shifted_oscillator(cplx alpha, cplx beta);

/// Square-well ladder pair with shifted factors:
/// a_n = n^2 + alpha beta, b_n = beta n, b'_n = alpha (n+1). No closed-form
/// spectrum is known for the shifted operator; the unshifted diagonal and the
/// partner diagonal (n+1)^2 + alpha beta are exposed instead.
ModelDescriptor shifted_square_well(cplx alpha, cplx beta);

/// Two-step band generated by squeezing, z = r e^{i theta}:
/// a_n = n cosh(2r) + sinh^2 r, b_n = conj(lambda) sqrt(n(n-1)),
/// b'_n = lambda sqrt((n+1)(n+2)) with lambda = e^{-i theta} cosh r sinh r.
ModelDescriptor squeezed(double r, double theta);

/// Oscillator displaced twice; reduces to shifted_oscillator(alpha+gamma,
/// beta+delta).
ModelDescriptor double_translation(cplx alpha, cplx beta, cplx gamma, cplx delta);

/// Vacuum coefficients of the squeezed model through the two-step factor
/// recurrence p_{k+2} = -e^{i theta} tanh(r) sqrt((k+1)/(k+2)) p_k.
std::vector<cplx> squeezed_vacuum_two_term(double r, double theta, std::size_t n);

/// Registry addressable by name plus a parameter map.
ModelDescriptor make_model(const std::string& name, const std::map<std::string, cplx>& params);
std::vector<std::string> available_models();

}  // namespace htridiag::models
