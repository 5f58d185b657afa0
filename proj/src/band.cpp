#include "htridiag/band.hpp"

#include <cmath>

namespace htridiag {

RieszMap::RieszMap(TruncatedMatrix R_in, TruncatedMatrix Rinv_in, double check_tol)
    : R(std::move(R_in)), Rinv(std::move(Rinv_in)) {
  if (R.dim() != Rinv.dim())
    throw DimensionError("RieszMap: R and Rinv must have the same dimension");
  const double dev = max_abs_diff(multiply(R, Rinv), identity_matrix(R.dim()));
  if (dev > check_tol)
    throw InvalidParameterError("RieszMap: R*Rinv deviates from the identity by " +
                                std::to_string(dev));
}

cplx matrix_element(const BandSpec& spec, std::size_t n, std::size_t m) {
  if (n == m + spec.h) return spec.b(n);
  if (n == m) return spec.a(n);
  if (m == n + spec.h) return spec.bp(n);
  return cplx(0.0, 0.0);
}

BandApplyResult apply_band(const BandSpec& spec, std::span<const cplx> coeffs) {
  const std::size_t n = coeffs.size();
  const std::size_t h = spec.h;
  if (n < h + 1)
    throw DimensionError("apply_band: need at least h+1 coefficients");
  BandApplyResult out;
  out.values.assign(n, cplx(0.0, 0.0));
  out.boundary_start = n - h;
  for (std::size_t l = 0; l < n; ++l) {
    cplx sum(0.0, 0.0);
    if (l >= h) sum += spec.b(l) * coeffs[l - h];
    sum += spec.a(l) * coeffs[l];
    if (l + h < n) sum += spec.bp(l) * coeffs[l + h];
    out.values[l] = sum;
  }
  return out;
}

BandSpec adjoint_band(const BandSpec& spec) {
  const std::size_t h = spec.h;
  ComplexSeq a(
      [a_in = spec.a](std::size_t m) { return std::conj(a_in(m)); },
      spec.a.label().empty() ? "" : "conj(" + spec.a.label() + ")");
  // Lower band of the adjoint comes from the conjugated upper band and vice
  // versa; the index shifts keep row/column roles aligned.
  ComplexSeq b(
      [bp_in = spec.bp, h](std::size_t m) {
        return m >= h ? std::conj(bp_in(m - h)) : cplx(0.0, 0.0);
      });
  ComplexSeq bp([b_in = spec.b, h](std::size_t m) { return std::conj(b_in(m + h)); });
  return BandSpec(h, std::move(a), std::move(b), std::move(bp));
}

TruncatedMatrix truncate(const BandSpec& spec, std::size_t n) {
  if (n < spec.h + 1)
    throw DimensionError("truncate: dimension must exceed the band offset");
  TruncatedMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = spec.a(i);
    if (i >= spec.h) m(i, i - spec.h) = spec.b(i);
    if (i + spec.h < n) m(i, i + spec.h) = spec.bp(i);
  }
  // Only the last h rows touch the cut edge of the band.
  m.set_interior(0, n - spec.h - 1);
  return m;
}

std::optional<std::size_t> classify_h_tridiagonal(const TruncatedMatrix& m, double tol) {
  if (tol <= 0.0) throw InvalidParameterError("classify_h_tridiagonal: tol must be positive");
  const std::size_t n = m.dim();
  for (std::size_t h = 1; h < n; ++h) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t off = i > j ? i - j : j - i;
        if (off == 0 || off == h) continue;
        if (std::abs(m(i, j)) > tol) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return h;
  }
  return std::nullopt;
}

TruncatedMatrix riesz_conjugate(const TruncatedMatrix& m, const RieszMap& riesz) {
  if (m.dim() != riesz.dim())
    throw DimensionError("riesz_conjugate: dimension mismatch");
  TruncatedMatrix out = multiply(riesz.Rinv, multiply(m, riesz.R));
  out.set_interior(m.interior_lo(), m.interior_hi());
  return out;
}

SymmetryReport symmetry_check(const BandSpec& spec, std::size_t n_max, double tol) {
  if (spec.h != 1)
    throw UnsupportedBandError("symmetry_check: only h = 1 bands are supported");
  if (n_max < 1) throw InvalidParameterError("symmetry_check: n_max must be >= 1");
  SymmetryReport report;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double im = std::abs(spec.a(n).imag());
    if (im > report.max_imag_a) report.max_imag_a = im;
    if (im > tol) report.diagonal_real = false;
    if (n >= 1) {
      const double dev = std::abs(spec.b(n) - std::conj(spec.bp(n - 1)));
      if (dev > report.max_band_deviation) report.max_band_deviation = dev;
      if (dev > tol) report.band_conjugate = false;
    }
  }
  report.self_adjoint = report.diagonal_real && report.band_conjugate;
  return report;
}

TruncatedMatrix identity_matrix(std::size_t n) {
  TruncatedMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = cplx(1.0, 0.0);
  return m;
}

TruncatedMatrix multiply(const TruncatedMatrix& a, const TruncatedMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("multiply: dimension mismatch");
  const std::size_t n = a.dim();
  TruncatedMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

TruncatedMatrix subtract(const TruncatedMatrix& a, const TruncatedMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("subtract: dimension mismatch");
  const std::size_t n = a.dim();
  TruncatedMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

TruncatedMatrix conjugate_transpose(const TruncatedMatrix& m) {
  const std::size_t n = m.dim();
  TruncatedMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = std::conj(m(j, i));
  return out;
}

std::vector<cplx> matvec(const TruncatedMatrix& m, std::span<const cplx> v) {
  if (v.size() != m.dim()) throw DimensionError("matvec: dimension mismatch");
  const std::size_t n = m.dim();
  std::vector<cplx> out(n, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    cplx sum(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const cplx mij = m(i, j);
      if (mij != cplx(0.0, 0.0)) sum += mij * v[j];
    }
    out[i] = sum;
  }
  return out;
}

double max_abs(const TruncatedMatrix& m) {
  double mx = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) mx = std::max(mx, std::abs(m(i, j)));
  return mx;
}

double max_abs_diff(const TruncatedMatrix& a, const TruncatedMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("max_abs_diff: dimension mismatch");
  double mx = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      mx = std::max(mx, std::abs(a(i, j) - b(i, j)));
  return mx;
}

}  // namespace htridiag
