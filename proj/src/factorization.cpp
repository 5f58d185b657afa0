#include "htridiag/factorization.hpp"

#include <cmath>
#include <mutex>
#include <string>

namespace htridiag {

BandSpec compose_band(const FactorizationSpec& f) {
  const std::size_t h = f.h;
  // a_n = c_n conj(c'_n) + d_n conj(d'_n). The d-term is algebraic: it is
  // kept for every n >= 0, matching how the defining relations are used.
  ComplexSeq a([c = f.c, cp = f.cp, d = f.d, dp = f.dp](std::size_t n) {
    return c(n) * std::conj(cp(n)) + d(n) * std::conj(dp(n));
  });
  // b_m = c_{m-h} conj(d'_m) for m >= h, zero below the band offset.
  ComplexSeq b([c = f.c, dp = f.dp, h](std::size_t m) {
    return m >= h ? c(m - h) * std::conj(dp(m)) : cplx(0.0, 0.0);
  });
  // b'_m = d_{m+h} conj(c'_m).
  ComplexSeq bp([cp = f.cp, d = f.d, h](std::size_t m) {
    return d(m + h) * std::conj(cp(m));
  });
  return BandSpec(h, std::move(a), std::move(b), std::move(bp));
}

BandSpec susy_band(const FactorizationSpec& f) {
  const std::size_t h = f.h;
  // A_n = c_n conj(c'_n) + d_{n+h} conj(d'_{n+h})
  ComplexSeq a([c = f.c, cp = f.cp, d = f.d, dp = f.dp, h](std::size_t n) {
    return c(n) * std::conj(cp(n)) + d(n + h) * std::conj(dp(n + h));
  });
  // B_m = c_m conj(d'_m) for m >= h
  ComplexSeq b([c = f.c, dp = f.dp, h](std::size_t m) {
    return m >= h ? c(m) * std::conj(dp(m)) : cplx(0.0, 0.0);
  });
  // B'_m = d_{m+h} conj(c'_{m+h})
  ComplexSeq bp([cp = f.cp, d = f.d, h](std::size_t m) {
    return d(m + h) * std::conj(cp(m + h));
  });
  return BandSpec(h, std::move(a), std::move(b), std::move(bp));
}

BandSpec commutator_band(const FactorizationSpec& f) {
  const std::size_t h = f.h;
  ComplexSeq a([d = f.d, dp = f.dp, h](std::size_t n) {
    return d(n + h) * std::conj(dp(n + h)) - d(n) * std::conj(dp(n));
  });
  ComplexSeq b([c = f.c, dp = f.dp, h](std::size_t m) {
    return m >= h ? std::conj(dp(m)) * (c(m) - c(m - h)) : cplx(0.0, 0.0);
  });
  ComplexSeq bp([cp = f.cp, d = f.d, h](std::size_t m) {
    return d(m + h) * (std::conj(cp(m + h)) - std::conj(cp(m)));
  });
  return BandSpec(h, std::move(a), std::move(b), std::move(bp));
}

namespace {

constexpr double kGaugeThreshold = 1e-14;

// Forward-recursion state for solve_factorization, extended on demand so the
// returned sequences stay total. Shared by the three output closures.
struct SolvedFactors {
  BandSpec band;
  ComplexSeq gauge_c;
  std::size_t h;
  std::mutex mutex;
  std::vector<cplx> cp, d, dp;  // grown together, index-aligned

  SolvedFactors(const BandSpec& band_in, const ComplexSeq& gauge, std::size_t h_in)
      : band(band_in), gauge_c(gauge), h(h_in) {}

  void extend_locked(std::size_t upto) {
    while (cp.size() <= upto) {
      const std::size_t n = cp.size();
      if (n < h) {
        // Seeds: the lowering parts vanish below the band offset, so the
        // diagonal relation alone fixes c'_n.
        const cplx cn = gauge_c(n);
        if (std::abs(cn) < kGaugeThreshold)
          throw GaugeBreakdownError("solve_factorization: gauge c_" + std::to_string(n) +
                                    " vanishes");
        d.push_back(cplx(0.0, 0.0));
        dp.push_back(cplx(0.0, 0.0));
        cp.push_back(std::conj(band.a(n) / cn));
        continue;
      }
      const cplx c_prev = gauge_c(n - h);
      if (std::abs(c_prev) < kGaugeThreshold)
        throw GaugeBreakdownError("solve_factorization: gauge c_" + std::to_string(n - h) +
                                  " vanishes");
      const cplx dp_n = std::conj(band.b(n) / c_prev);
      const cplx cp_prev = cp[n - h];
      if (std::abs(cp_prev) < kGaugeThreshold)
        throw GaugeBreakdownError("solve_factorization: c'_" + std::to_string(n - h) +
                                  " vanishes; this gauge admits no factorization");
      const cplx d_n = band.bp(n - h) / std::conj(cp_prev);
      const cplx cn = gauge_c(n);
      if (std::abs(cn) < kGaugeThreshold)
        throw GaugeBreakdownError("solve_factorization: gauge c_" + std::to_string(n) +
                                  " vanishes");
      const cplx cp_n = std::conj((band.a(n) - d_n * std::conj(dp_n)) / cn);
      d.push_back(d_n);
      dp.push_back(dp_n);
      cp.push_back(cp_n);
    }
  }

  cplx get(const std::vector<cplx> SolvedFactors::* member, std::size_t n) {
    std::lock_guard<std::mutex> lock(mutex);
    extend_locked(n);
    return (this->*member)[n];
  }
};

}  // namespace

FactorizationSpec solve_factorization(const BandSpec& band, const ComplexSeq& gauge_c,
                                      std::size_t n_max) {
  if (band.h < 1) throw InvalidParameterError("solve_factorization: invalid band");
  auto state = std::make_shared<SolvedFactors>(band, gauge_c, band.h);
  {
    std::lock_guard<std::mutex> lock(state->mutex);
    state->extend_locked(n_max);
  }
  ComplexSeq cp([state](std::size_t n) { return state->get(&SolvedFactors::cp, n); });
  ComplexSeq d([state](std::size_t n) { return state->get(&SolvedFactors::d, n); });
  ComplexSeq dp([state](std::size_t n) { return state->get(&SolvedFactors::dp, n); });
  return FactorizationSpec(band.h, gauge_c, std::move(cp), std::move(d), std::move(dp));
}

namespace {

// Running log-magnitude and unit phase of d_1 d_2 ... d_n. Keeping the
// modulus in log space avoids overflow of factorial-type products.
struct LogProduct {
  std::vector<double> log_mag{0.0};          // log |d_n!|
  std::vector<cplx> phase{cplx(1.0, 0.0)};   // unit phase of d_n!
};

LogProduct accumulate_products(const ComplexSeq& seq, std::size_t n_max) {
  LogProduct prod;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const cplx v = seq(n);
    const double mag = std::abs(v);
    if (mag == 0.0)
      throw ZeroDivisorError("rescale_factorization: d_" + std::to_string(n) + " vanishes");
    prod.log_mag.push_back(prod.log_mag.back() + std::log(mag));
    prod.phase.push_back(prod.phase.back() * (v / mag));
  }
  return prod;
}

bool magnitudes_span_wide_range(const ComplexSeq& seq, std::size_t n_max) {
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double mag = std::abs(seq(n));
    if (mag == 0.0) continue;  // reported later as a zero divisor
    if (first) {
      lo = hi = mag;
      first = false;
    } else {
      lo = std::min(lo, mag);
      hi = std::max(hi, mag);
    }
  }
  return !first && hi > lo * 1e12;
}

}  // namespace

RescaleResult rescale_factorization(const FactorizationSpec& f, std::size_t n_max) {
  if (f.h != 1)
    throw UnsupportedBandError("rescale_factorization: only h = 1 factorizations are supported");
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (std::abs(f.c(n)) != 0.0)
      throw RequiresLadderFormError("rescale_factorization: c_" + std::to_string(n) +
                                    " is nonzero; X must be a pure lowering operator");
  }
  const bool log_space = magnitudes_span_wide_range(f.d, n_max) ||
                         magnitudes_span_wide_range(f.dp, n_max);

  RescaleResult out;
  if (log_space) {
    auto pd = std::make_shared<LogProduct>(accumulate_products(f.d, n_max));
    auto pdp = std::make_shared<LogProduct>(accumulate_products(f.dp, n_max));
    auto scale = [](std::shared_ptr<LogProduct> prod) {
      return ComplexSeq([prod](std::size_t n) {
        if (n >= prod->log_mag.size())
          throw ZeroDivisorError("rescale_factorization: index beyond solved range");
        return std::exp(0.5 * std::lgamma(double(n) + 1.0) - prod->log_mag[n]) /
               prod->phase[n];
      });
    };
    out.scale_phi = scale(pd);
    out.scale_psi = scale(pdp);
    out.pairing = ComplexSeq([pd, pdp](std::size_t n) {
      if (n >= pd->log_mag.size())
        throw ZeroDivisorError("rescale_factorization: index beyond solved range");
      return std::exp(std::lgamma(double(n) + 1.0) - pd->log_mag[n] - pdp->log_mag[n]) /
             (pd->phase[n] * pdp->phase[n]);
    });
    return out;
  }

  // Moderate magnitudes: plain running products.
  std::vector<cplx> sphi{cplx(1.0, 0.0)}, spsi{cplx(1.0, 0.0)}, pairing{cplx(1.0, 0.0)};
  cplx dfact(1.0, 0.0), dpfact(1.0, 0.0);
  double nfact = 1.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const cplx dn = f.d(n);
    const cplx dpn = f.dp(n);
    if (std::abs(dn) == 0.0 || std::abs(dpn) == 0.0)
      throw ZeroDivisorError("rescale_factorization: lowering coefficient at index " +
                             std::to_string(n) + " vanishes");
    dfact *= dn;
    dpfact *= dpn;
    nfact *= double(n);
    const double root = std::sqrt(nfact);
    sphi.push_back(root / dfact);
    spsi.push_back(root / dpfact);
    pairing.push_back(nfact / (dfact * dpfact));
  }
  auto bounded = [](std::vector<cplx> values) {
    auto store = std::make_shared<std::vector<cplx>>(std::move(values));
    return ComplexSeq([store](std::size_t n) {
      if (n >= store->size())
        throw ZeroDivisorError("rescale_factorization: index beyond solved range");
      return (*store)[n];
    });
  };
  out.scale_phi = bounded(std::move(sphi));
  out.scale_psi = bounded(std::move(spsi));
  out.pairing = bounded(std::move(pairing));
  return out;
}

PseudoBosonReport check_pseudoboson_combination(const FactorizationSpec& f,
                                                const CombinationCoeffs& mix,
                                                std::size_t n_max, double tol) {
  if (f.h != 1)
    throw UnsupportedBandError("check_pseudoboson_combination: only h = 1 is supported");
  PseudoBosonReport report;
  const cplx det = mix.determinant();
  const cplx c0 = f.c(0);
  const cplx cp0 = f.cp(0);
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (n > 0) {
      const double dc = std::abs(f.c(n) - c0);
      const double dcp = std::abs(f.cp(n) - cp0);
      report.max_residual = std::max({report.max_residual, dc, dcp});
      if (dc > tol) report.constant_c = false;
      if (dcp > tol) report.constant_cp = false;
    }
    const double dw = std::abs(f.d(n) * std::conj(f.dp(n)) - double(n) / det);
    report.max_residual = std::max(report.max_residual, dw);
    if (dw > tol) report.ladder_weights = false;
  }
  report.pass = report.constant_c && report.constant_cp && report.ladder_weights;
  return report;
}

QuadraticForm compose_quadratic(const FactorizationSpec& f, const CombinationCoeffs& mix,
                                std::size_t check_n_max) {
  const PseudoBosonReport report = check_pseudoboson_combination(f, mix, check_n_max);
  if (!report.pass)
    throw NotPseudoBosonicError(
        "compose_quadratic: [C, D] is not the identity on the working range (max residual " +
        std::to_string(report.max_residual) + ")");
  const cplx det = mix.determinant();
  const cplx inv_det2 = cplx(1.0, 0.0) / (det * det);
  QuadraticForm q;
  q.c2 = -mix.delta * mix.gamma * inv_det2;
  q.d2 = -mix.alpha * mix.beta * inv_det2;
  q.cd = (mix.alpha * mix.delta + mix.beta * mix.gamma) * inv_det2;
  q.id = -mix.alpha * mix.delta * inv_det2;
  return q;
}

TruncatedMatrix x_matrix(const FactorizationSpec& f, std::size_t n) {
  if (n < f.h + 1) throw DimensionError("x_matrix: dimension must exceed the band offset");
  TruncatedMatrix m(n);
  for (std::size_t j = 0; j < n; ++j) {
    m(j, j) = f.c(j);
    if (j >= f.h) m(j - f.h, j) = f.d(j);
  }
  m.set_interior(f.h, n - f.h - 1);
  return m;
}

TruncatedMatrix y_dagger_matrix(const FactorizationSpec& f, std::size_t n) {
  if (n < f.h + 1)
    throw DimensionError("y_dagger_matrix: dimension must exceed the band offset");
  TruncatedMatrix m(n);
  for (std::size_t j = 0; j < n; ++j) {
    m(j, j) = std::conj(f.cp(j));
    if (j + f.h < n) m(j + f.h, j) = std::conj(f.dp(j + f.h));
  }
  m.set_interior(f.h, n - f.h - 1);
  return m;
}

namespace {

TruncatedMatrix combination_matrix(const FactorizationSpec& f, cplx wx, cplx wy,
                                   std::size_t n) {
  TruncatedMatrix x = x_matrix(f, n);
  TruncatedMatrix y = y_dagger_matrix(f, n);
  TruncatedMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = wx * x(i, j) + wy * y(i, j);
  out.set_interior(f.h, n - f.h - 1);
  return out;
}

}  // namespace

TruncatedMatrix combination_c_matrix(const FactorizationSpec& f, const CombinationCoeffs& mix,
                                     std::size_t n) {
  return combination_matrix(f, mix.alpha, mix.beta, n);
}

TruncatedMatrix combination_d_matrix(const FactorizationSpec& f, const CombinationCoeffs& mix,
                                     std::size_t n) {
  return combination_matrix(f, mix.gamma, mix.delta, n);
}

TruncatedMatrix evaluate_quadratic(const QuadraticForm& q, const TruncatedMatrix& c_mat,
                                   const TruncatedMatrix& d_mat) {
  if (c_mat.dim() != d_mat.dim())
    throw DimensionError("evaluate_quadratic: dimension mismatch");
  const std::size_t n = c_mat.dim();
  TruncatedMatrix cc = multiply(c_mat, c_mat);
  TruncatedMatrix dd = multiply(d_mat, d_mat);
  TruncatedMatrix cd = multiply(c_mat, d_mat);
  TruncatedMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      out(i, j) = q.c2 * cc(i, j) + q.d2 * dd(i, j) + q.cd * cd(i, j);
    out(i, i) += q.id;
  }
  return out;
}

}  // namespace htridiag
