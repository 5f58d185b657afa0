#include "htridiag/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace htridiag::oracle {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// ----------------------------------------------------------------------
// LU with partial pivoting.

struct LuFactors {
  std::vector<cplx> data;         // packed L (unit diagonal) and U
  std::vector<std::size_t> perm;  // row i of the factors is row perm[i] of A
  std::size_t dim = 0;
  double scale = 0.0;             // largest initial entry, for pivot thresholds
  bool singular = false;

  cplx& at(std::size_t i, std::size_t j) { return data[i * dim + j]; }
  cplx at(std::size_t i, std::size_t j) const { return data[i * dim + j]; }
};

// Factor PA = LU. Never throws on tiny pivots; callers inspect `singular`
// or the pivot magnitudes as appropriate for their use.
LuFactors lu_factor(const TruncatedMatrix& a) {
  const std::size_t n = a.dim();
  LuFactors lu;
  lu.dim = n;
  lu.data.resize(n * n);
  lu.perm.resize(n);
  std::iota(lu.perm.begin(), lu.perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      lu.at(i, j) = a(i, j);
      lu.scale = std::max(lu.scale, std::abs(a(i, j)));
    }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot_row = k;
    double best = std::abs(lu.at(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double cand = std::abs(lu.at(i, k));
      if (cand > best) {
        best = cand;
        pivot_row = i;
      }
    }
    if (pivot_row != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu.at(k, j), lu.at(pivot_row, j));
      std::swap(lu.perm[k], lu.perm[pivot_row]);
    }
    const cplx pivot = lu.at(k, k);
    if (std::abs(pivot) == 0.0) {
      lu.singular = true;
      continue;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx factor = lu.at(i, k) / pivot;
      lu.at(i, k) = factor;
      if (factor == cplx(0.0, 0.0)) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu.at(i, j) -= factor * lu.at(k, j);
    }
  }
  return lu;
}

double smallest_pivot(const LuFactors& lu) {
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < lu.dim; ++k)
    smallest = std::min(smallest, std::abs(lu.at(k, k)));
  return smallest;
}

std::vector<cplx> lu_solve(const LuFactors& lu, std::span<const cplx> b) {
  const std::size_t n = lu.dim;
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[lu.perm[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= lu.at(i, j) * x[j];
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= lu.at(ii, j) * x[j];
    x[ii] /= lu.at(ii, ii);
  }
  return x;
}

// Solve A^dag x = b from the factorization of A: A^dag = U^dag L^dag P.
std::vector<cplx> lu_solve_adjoint(const LuFactors& lu, std::span<const cplx> b) {
  const std::size_t n = lu.dim;
  std::vector<cplx> z(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) z[i] -= std::conj(lu.at(j, i)) * z[j];
    z[i] /= std::conj(lu.at(i, i));
  }
  for (std::size_t ii = n; ii-- > 0;)
    for (std::size_t j = ii + 1; j < n; ++j) z[ii] -= std::conj(lu.at(j, ii)) * z[j];
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) x[lu.perm[i]] = z[i];
  return x;
}

// ----------------------------------------------------------------------
// Hessenberg reduction and shifted QR.

void hessenberg_reduce(TruncatedMatrix& a) {
  const std::size_t n = a.dim();
  if (n < 3) return;
  std::vector<cplx> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double norm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) norm2 += std::norm(a(i, k));
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) continue;
    const cplx x0 = a(k + 1, k);
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0, 0.0);
    // v = x + e^{i arg(x0)} |x| e_1; the reflector I - tau v v^dag maps x to
    // a multiple of e_1.
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = a(i, k);
      if (i == k + 1) v[i] += phase * norm;
      vnorm2 += std::norm(v[i]);
    }
    if (vnorm2 == 0.0) continue;
    const double tau = 2.0 / vnorm2;
    // Left update: A -= tau v (v^dag A) on rows k+1..n-1.
    for (std::size_t j = k; j < n; ++j) {
      cplx dot(0.0, 0.0);
      for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i]) * a(i, j);
      dot *= tau;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= v[i] * dot;
    }
    // Right update: A -= tau (A v) v^dag on columns k+1..n-1.
    for (std::size_t i = 0; i < n; ++i) {
      cplx dot(0.0, 0.0);
      for (std::size_t j = k + 1; j < n; ++j) dot += a(i, j) * v[j];
      dot *= tau;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= dot * std::conj(v[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = cplx(0.0, 0.0);
  }
}

struct GivensRotation {
  double c;  // real cosine
  cplx s;
};

// Rotation with [c s; -conj(s) c] [x y]^T = [r 0]^T.
GivensRotation make_givens(cplx x, cplx y) {
  const double ax = std::abs(x);
  const double ay = std::abs(y);
  if (ay == 0.0) return {1.0, cplx(0.0, 0.0)};
  if (ax == 0.0) return {0.0, cplx(1.0, 0.0)};
  const double rho = std::hypot(ax, ay);
  return {ax / rho, x * std::conj(y) / (ax * rho)};
}

// Eigenvalue of the trailing 2x2 block closest to its lower-right entry.
cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
  const cplx t = (a - d) * 0.5;
  const cplx disc = std::sqrt(t * t + b * c);
  // Pick the branch that avoids cancellation in t +- disc.
  const cplx denom = (std::abs(t + disc) >= std::abs(t - disc)) ? t + disc : t - disc;
  if (std::abs(denom) == 0.0) return d;
  return d - b * c / denom;
}

std::vector<cplx> qr_eigenvalues(TruncatedMatrix h) {
  const std::size_t n = h.dim();
  std::vector<cplx> eigs(n);
  if (n == 1) {
    eigs[0] = h(0, 0);
    return eigs;
  }
  std::size_t hi = n - 1;
  std::size_t iters_this_block = 0;
  std::size_t total_iters = 0;
  const std::size_t max_iters = 50 * n;
  while (true) {
    // Zero negligible subdiagonals below the active corner.
    for (std::size_t i = 1; i <= hi; ++i) {
      const double bound = kEps * (std::abs(h(i - 1, i - 1)) + std::abs(h(i, i)));
      if (std::abs(h(i, i - 1)) <= bound) h(i, i - 1) = cplx(0.0, 0.0);
    }
    if (hi == 0 || h(hi, hi - 1) == cplx(0.0, 0.0)) {
      eigs[hi] = h(hi, hi);
      if (hi == 0) break;
      --hi;
      iters_this_block = 0;
      continue;
    }
    // Active block [lo, hi].
    std::size_t lo = hi;
    while (lo > 0 && h(lo, lo - 1) != cplx(0.0, 0.0)) --lo;
    if (++total_iters > max_iters)
      throw NoConvergenceError("dense_eigenvalues: QR failed to deflate within 50*dim sweeps");
    cplx shift;
    if (++iters_this_block % 10 == 0) {
      // Exceptional shift after stagnation.
      shift = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
    } else {
      shift = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    }
    // Implicit single-shift sweep, chasing the bulge down the block.
    cplx x = h(lo, lo) - shift;
    cplx y = h(lo + 1, lo);
    for (std::size_t k = lo; k < hi; ++k) {
      const GivensRotation g = make_givens(x, y);
      const std::size_t row_start = k > lo ? k - 1 : lo;
      for (std::size_t j = row_start; j <= hi; ++j) {
        const cplx t1 = h(k, j);
        const cplx t2 = h(k + 1, j);
        h(k, j) = g.c * t1 + g.s * t2;
        h(k + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
      }
      const std::size_t col_end = std::min(k + 2, hi);
      for (std::size_t i = lo; i <= col_end; ++i) {
        const cplx t1 = h(i, k);
        const cplx t2 = h(i, k + 1);
        h(i, k) = g.c * t1 + std::conj(g.s) * t2;
        h(i, k + 1) = -g.s * t1 + g.c * t2;
      }
      if (k + 1 < hi) {
        x = h(k + 1, k);
        y = h(k + 2, k);
      }
    }
  }
  std::sort(eigs.begin(), eigs.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return eigs;
}

double sup_norm(std::span<const cplx> v) {
  double mx = 0.0;
  for (const cplx& z : v) mx = std::max(mx, std::abs(z));
  return mx;
}

// Divide by the largest-modulus entry: sup norm one, that entry exactly 1.
void sup_normalize(std::vector<cplx>& v) {
  std::size_t arg = 0;
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  if (best == 0.0) return;
  const cplx pivot = v[arg];
  for (cplx& z : v) z /= pivot;
}

}  // namespace

SpectrumEstimate dense_eigenvalues(const TruncatedMatrix& m) {
  if (m.dim() > 512)
    throw DimensionError("dense_eigenvalues: truncations beyond 512 are out of scope");
  SpectrumEstimate out;
  const TruncatedMatrix mh = conjugate_transpose(m);
  out.departure_from_normality = max_abs_diff(multiply(m, mh), multiply(mh, m));
  const double scale = std::max(1.0, max_abs(m));
  if (out.departure_from_normality > 1e-10 * scale * scale)
    out.condition_note = "non-normal truncation: computed eigenvalues may be unreliable "
                         "proxies for the operator spectrum";
  TruncatedMatrix h = m;
  hessenberg_reduce(h);
  out.eigenvalues = qr_eigenvalues(std::move(h));
  return out;
}

ResidualReport residual_check(const TruncatedMatrix& m, cplx energy,
                              const EigenPacket& packet, double tol) {
  if (packet.size() != m.dim())
    throw DimensionError("residual_check: packet and matrix dimensions differ");
  const std::vector<cplx> v = packet.coefficients();
  const std::vector<cplx> mv = matvec(m, v);
  const double vsup = sup_norm(v);
  const double denom = std::max(1.0, vsup);
  ResidualReport report;
  for (std::size_t l = m.interior_lo(); l <= m.interior_hi(); ++l)
    report.interior_residual =
        std::max(report.interior_residual, std::abs(mv[l] - energy * v[l]) / denom);
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t l = 0; l < v.size(); ++l) {
    const double mass = std::norm(v[l]);
    total += mass;
    if (l > m.interior_hi()) tail += mass;
  }
  report.tail_mass = total > 0.0 ? tail / total : 0.0;
  report.pass = report.interior_residual <= tol && report.tail_mass <= tol;
  return report;
}

InverseIterationResult inverse_iteration(const TruncatedMatrix& m, cplx energy_guess,
                                         std::size_t iters) {
  const std::size_t n = m.dim();
  TruncatedMatrix shifted = m;
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= energy_guess;
  const LuFactors lu = lu_factor(shifted);
  const double threshold = lu.scale * double(n) * kEps;
  if (lu.singular || smallest_pivot(lu) < threshold)
    throw SingularShiftError(
        "inverse_iteration: shifted system is numerically singular; retry with a "
        "perturbed shift");
  std::vector<cplx> v(n, cplx(1.0, 0.0));
  std::vector<cplx> w(n, cplx(1.0, 0.0));
  sup_normalize(v);
  sup_normalize(w);
  for (std::size_t it = 0; it < iters; ++it) {
    v = lu_solve(lu, v);
    sup_normalize(v);
    w = lu_solve_adjoint(lu, w);
    sup_normalize(w);
  }
  const std::vector<cplx> mv = matvec(m, v);
  cplx num(0.0, 0.0), den(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    num += std::conj(w[i]) * mv[i];
    den += std::conj(w[i]) * v[i];
  }
  if (std::abs(den) == 0.0)
    throw NoConvergenceError("inverse_iteration: left/right vectors are orthogonal");
  return {std::move(v), num / den};
}

double gram_check(const std::vector<std::vector<cplx>>& rights,
                  const std::vector<std::vector<cplx>>& lefts) {
  double dev = 0.0;
  for (std::size_t n = 0; n < rights.size(); ++n) {
    for (std::size_t m = 0; m < lefts.size(); ++m) {
      if (rights[n].size() != lefts[m].size())
        throw DimensionError("gram_check: truncation lengths differ");
      cplx sum(0.0, 0.0);
      for (std::size_t k = 0; k < rights[n].size(); ++k)
        sum += std::conj(rights[n][k]) * lefts[m][k];
      const cplx expected = n == m ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
      dev = std::max(dev, std::abs(sum - expected));
    }
  }
  return dev;
}

double min_singular_value(const TruncatedMatrix& m) {
  const std::size_t n = m.dim();
  const LuFactors lu = lu_factor(m);
  if (lu.singular) return 0.0;
  // Inverse power iteration on A A^dag through the factorization.
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = cplx(std::cos(0.7 * double(i) + 0.3), std::sin(1.3 * double(i) + 0.1));
  double nu = 0.0;
  for (std::size_t it = 0; it < 24; ++it) {
    std::vector<cplx> w = lu_solve(lu, v);
    std::vector<cplx> u = lu_solve_adjoint(lu, w);
    double norm2 = 0.0;
    for (const cplx& z : u) norm2 += std::norm(z);
    const double norm = std::sqrt(norm2);
    if (norm == 0.0 || !std::isfinite(norm)) return 0.0;
    nu = norm;
    for (cplx& z : u) z /= norm;
    v = std::move(u);
  }
  return 1.0 / std::sqrt(nu);
}

TruncatedMatrix invert(const TruncatedMatrix& m) {
  const std::size_t n = m.dim();
  const LuFactors lu = lu_factor(m);
  if (lu.singular) throw SingularShiftError("invert: matrix is singular");
  TruncatedMatrix out(n);
  std::vector<cplx> e(n, cplx(0.0, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = cplx(1.0, 0.0);
    const std::vector<cplx> col = lu_solve(lu, e);
    for (std::size_t i = 0; i < n; ++i) out(i, j) = col[i];
    e[j] = cplx(0.0, 0.0);
  }
  return out;
}

std::vector<cplx> align_phase(const std::vector<cplx>& v) {
  std::size_t arg = 0;
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  std::vector<cplx> out = v;
  if (best == 0.0) return out;
  const cplx rot = std::abs(v[arg]) / v[arg];
  for (cplx& z : out) z *= rot;
  return out;
}

}  // namespace htridiag::oracle
