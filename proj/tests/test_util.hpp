#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "htridiag/band.hpp"
#include "htridiag/types.hpp"

namespace htridiag::testutil {

inline cplx random_complex(std::mt19937& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  return cplx(dist(rng), dist(rng));
}

/// Random h=1 band with stored coefficients; the upper band keeps its modulus
/// in [0.4, 1.6] so the recurrences stay well conditioned.
inline BandSpec random_band(std::mt19937& rng, std::size_t n_terms, bool symmetric) {
  std::uniform_real_distribution<double> diag(-1.0, 1.0);
  std::uniform_real_distribution<double> mod(0.4, 1.6);
  std::vector<cplx> a(n_terms), b(n_terms), bp(n_terms);
  for (std::size_t i = 0; i < n_terms; ++i) {
    a[i] = symmetric ? cplx(diag(rng), 0.0) : random_complex(rng);
    bp[i] = symmetric ? cplx(mod(rng), 0.0) : cplx(mod(rng), 0.0) * random_complex(rng, 1.0);
    if (std::abs(bp[i]) < 0.2) bp[i] += cplx(0.5, 0.0);
  }
  b[0] = cplx(0.0, 0.0);
  for (std::size_t i = 1; i < n_terms; ++i)
    b[i] = symmetric ? bp[i - 1] : cplx(mod(rng), 0.0) * random_complex(rng, 1.0);
  return BandSpec(1, ComplexSeq::from_values(std::move(a)),
                  ComplexSeq::from_values(std::move(b)),
                  ComplexSeq::from_values(std::move(bp)));
}

inline double max_abs(const std::vector<cplx>& v) {
  double mx = 0.0;
  for (const cplx& z : v) mx = std::max(mx, std::abs(z));
  return mx;
}

}  // namespace htridiag::testutil
