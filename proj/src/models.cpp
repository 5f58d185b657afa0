#include "htridiag/models.hpp"

#include <cmath>
#include <set>

namespace htridiag::models {

namespace {

double sqrt_index(std::size_t n) { return std::sqrt(double(n)); }

// Integer power of a unit-modulus factor. Plain multiplication keeps real
// phases (e.g. -1) exact, which std::pow with a double exponent does not.
cplx unit_pow(cplx unit, std::size_t k) {
  cplx out(1.0, 0.0);
  for (std::size_t i = 0; i < k; ++i) out *= unit;
  return out;
}

// Stable evaluator for the displaced-oscillator eigenvector coefficients.
// The normalized coefficient is
//   p_k^(n) = (-alpha)^k / sqrt(k!) * S_n(k) / S_n(0),
//   S_n(k)  = sum_{j=0}^{min(n,k)} C(n,j) xi^{n-j} j! C(k,j),  xi = -alpha*beta.
// Binomials and factorials go through lgamma so large k stays in range; the
// j-sum is accumulated per k.
cplx displaced_sum(cplx xi, std::size_t n, std::size_t k) {
  const double log_xi = std::abs(xi) > 0.0 ? std::log(std::abs(xi)) : 0.0;
  const cplx phase_xi = std::abs(xi) > 0.0 ? xi / std::abs(xi) : cplx(0.0, 0.0);
  cplx sum(0.0, 0.0);
  const std::size_t jmax = std::min(n, k);
  for (std::size_t j = 0; j <= jmax; ++j) {
    if (std::abs(xi) == 0.0 && j != n) continue;  // xi^0 survives only at j = n
    double log_mag = std::lgamma(double(n) + 1.0) - std::lgamma(double(n - j) + 1.0) +
                     std::lgamma(double(k) + 1.0) - std::lgamma(double(j) + 1.0) -
                     std::lgamma(double(k - j) + 1.0);
    cplx phase(1.0, 0.0);
    if (j < n) {
      log_mag += double(n - j) * log_xi;
      phase = unit_pow(phase_xi, n - j);
    }
    sum += phase * std::exp(log_mag);
  }
  return sum;
}

std::function<cplx(std::size_t, std::size_t)> displaced_reference(cplx alpha, cplx beta) {
  const cplx xi = -alpha * beta;
  return [alpha, xi](std::size_t n, std::size_t k) -> cplx {
    if (k == 0) return cplx(1.0, 0.0);
    const double mod_alpha = std::abs(alpha);
    if (mod_alpha == 0.0) return cplx(0.0, 0.0);  // ground state is the basis vector
    const cplx s0 = displaced_sum(xi, n, 0);
    const cplx sk = displaced_sum(xi, n, k);
    const double log_pref = double(k) * std::log(mod_alpha) -
                            0.5 * std::lgamma(double(k) + 1.0);
    const cplx unit = -alpha / mod_alpha;
    return unit_pow(unit, k) * std::exp(log_pref) * (sk / s0);
  };
}

}  // namespace

ModelDescriptor shifted_oscillator(cplx alpha, cplx beta) {
  const cplx ab = alpha * beta;
  ComplexSeq a([ab](std::size_t n) { return cplx(double(n), 0.0) + ab; }, "n + alpha*beta");
  ComplexSeq b([alpha](std::size_t n) { return alpha * sqrt_index(n); }, "alpha*sqrt(n)");
  ComplexSeq bp([beta](std::size_t n) { return beta * sqrt_index(n + 1); },
                "beta*sqrt(n+1)");
  BandSpec band(1, a, b, bp);

  FactorizationSpec factors(
      1, ComplexSeq::constant(alpha, "alpha"), ComplexSeq::constant(std::conj(beta), "conj(beta)"),
      ComplexSeq([](std::size_t n) { return cplx(sqrt_index(n), 0.0); }, "sqrt(n)"),
      ComplexSeq([](std::size_t n) { return cplx(sqrt_index(n), 0.0); }, "sqrt(n)"));

  // Partner band: the diagonal advances by one index, the off-bands repeat.
  BandSpec susy(1, ComplexSeq([a](std::size_t n) { return a(n + 1); }, "n + 1 + alpha*beta"),
                b, bp);

  ModelDescriptor model("shifted_oscillator", {{"alpha", alpha}, {"beta", beta}},
                        std::move(band), std::move(factors), std::move(susy));
  model.spectrum = ComplexSeq([](std::size_t n) { return cplx(double(n), 0.0); }, "n");
  model.reference_p = displaced_reference(alpha, beta);
  model.reference_q = displaced_reference(std::conj(beta), std::conj(alpha));
  model.reference_levels = (alpha == cplx(0.0, 0.0) || beta == cplx(0.0, 0.0)) ? 1 : 64;
  return model;
}

ModelDescriptor shifted_square_well(cplx alpha, cplx beta) {
  const cplx ab = alpha * beta;
  ComplexSeq a([ab](std::size_t n) { return cplx(double(n) * double(n), 0.0) + ab; },
               "n^2 + alpha*beta");
  ComplexSeq b([beta](std::size_t n) { return beta * double(n); }, "beta*n");
  ComplexSeq bp([alpha](std::size_t n) { return alpha * double(n + 1); }, "alpha*(n+1)");
  BandSpec band(1, a, b, bp);

  FactorizationSpec factors(
      1, ComplexSeq::constant(beta, "beta"), ComplexSeq::constant(std::conj(alpha), "conj(alpha)"),
      ComplexSeq([](std::size_t n) { return cplx(double(n), 0.0); }, "n"),
      ComplexSeq([](std::size_t n) { return cplx(double(n), 0.0); }, "n"));

  BandSpec susy(
      1,
      ComplexSeq([ab](std::size_t n) { return cplx(double(n + 1) * double(n + 1), 0.0) + ab; },
                 "(n+1)^2 + alpha*beta"),
      b, bp);

  ModelDescriptor model("shifted_square_well", {{"alpha", alpha}, {"beta", beta}},
                        std::move(band), std::move(factors), std::move(susy));
  // No closed-form spectrum for the shifted operator; the unshifted diagonal
  // n^2 (partner (n+1)^2) stands in as metadata only.
  model.note = "spectrum of the shifted operator is not known in closed form; "
               "the unshifted diagonal is n^2 with partner diagonal (n+1)^2";
  return model;
}

ModelDescriptor squeezed(double r, double theta) {
  if (r < 0.0) throw InvalidParameterError("squeezed: r must be non-negative");
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  const double mu = std::cosh(2.0 * r);
  const double sh2 = sh * sh;
  const cplx lambda = std::polar(ch * sh, -theta);

  ComplexSeq a([mu, sh2](std::size_t n) { return cplx(double(n) * mu + sh2, 0.0); },
               "n*cosh(2r) + sinh(r)^2");
  ComplexSeq b(
      [lambda](std::size_t n) {
        return n >= 2 ? std::conj(lambda) * std::sqrt(double(n) * double(n - 1))
                      : cplx(0.0, 0.0);
      },
      "conj(lambda)*sqrt(n(n-1))");
  ComplexSeq bp(
      [lambda](std::size_t n) {
        return lambda * std::sqrt(double(n + 1) * double(n + 2));
      },
      "lambda*sqrt((n+1)(n+2))");
  BandSpec band(2, a, b, bp);

  ComplexSeq factor_c([sh](std::size_t n) { return cplx(sqrt_index(n + 1) * sh, 0.0); },
                      "sqrt(n+1)*sinh(r)");
  ComplexSeq factor_d(
      [ch, theta](std::size_t n) { return std::polar(sqrt_index(n) * ch, -theta); },
      "e^{-i theta}*sqrt(n)*cosh(r)");
  FactorizationSpec factors(2, factor_c, factor_c, factor_d, factor_d);

  // The canonical partner shifts the diagonal by exactly one.
  BandSpec susy(2, ComplexSeq([a](std::size_t n) { return a(n) + cplx(1.0, 0.0); },
                              "n*cosh(2r) + sinh(r)^2 + 1"),
                b, bp);

  ModelDescriptor model("squeezed", {{"r", cplx(r, 0.0)}, {"theta", cplx(theta, 0.0)}},
                        std::move(band), std::move(factors), std::move(susy));
  model.spectrum = ComplexSeq([](std::size_t n) { return cplx(double(n), 0.0); }, "n");
  model.level_stride = 2;  // odd levels have vanishing leading coefficient
  const double t = std::tanh(r);
  model.reference_p = [t, theta](std::size_t level, std::size_t k) -> cplx {
    if (level != 0) return cplx(0.0, 0.0);
    if (k % 2 != 0) return cplx(0.0, 0.0);
    const std::size_t half = k / 2;
    if (half == 0) return cplx(1.0, 0.0);
    if (t == 0.0) return cplx(0.0, 0.0);
    const double log_mag = double(half) * std::log(t / 2.0) +
                           0.5 * std::lgamma(double(k) + 1.0) -
                           std::lgamma(double(half) + 1.0);
    return unit_pow(-std::polar(1.0, theta), half) * std::exp(log_mag);
  };
  model.reference_q = model.reference_p;  // both ground expansions share the coefficients
  model.reference_levels = 1;
  model.reference_c0 = cplx(std::exp(-0.5 * std::log(ch)), 0.0);
  return model;
}

ModelDescriptor double_translation(cplx alpha, cplx beta, cplx gamma, cplx delta) {
  ModelDescriptor model = shifted_oscillator(alpha + gamma, beta + delta);
  model.name = "double_translation";
  model.params = {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma}, {"delta", delta}};
  model.note = "parameters combine additively: equivalent to shifted_oscillator("
               "alpha+gamma, beta+delta)";
  return model;
}

std::vector<cplx> squeezed_vacuum_two_term(double r, double theta, std::size_t n) {
  if (r < 0.0) throw InvalidParameterError("squeezed_vacuum_two_term: r must be non-negative");
  std::vector<cplx> p(n, cplx(0.0, 0.0));
  if (n == 0) return p;
  p[0] = cplx(1.0, 0.0);
  const cplx step = -std::polar(std::tanh(r), theta);
  for (std::size_t k = 0; k + 2 < n; k += 2)
    p[k + 2] = step * std::sqrt(double(k + 1) / double(k + 2)) * p[k];
  return p;
}

namespace {

cplx param_or_zero(const std::map<std::string, cplx>& params, const std::string& key) {
  auto it = params.find(key);
  return it == params.end() ? cplx(0.0, 0.0) : it->second;
}

double real_param(const std::map<std::string, cplx>& params, const std::string& key) {
  const cplx v = param_or_zero(params, key);
  if (v.imag() != 0.0)
    throw InvalidParameterError("parameter '" + key + "' must be real");
  return v.real();
}

void reject_unknown_keys(const std::map<std::string, cplx>& params,
                         const std::set<std::string>& known) {
  for (const auto& [key, value] : params) {
    (void)value;
    if (!known.count(key))
      throw InvalidParameterError("unknown parameter '" + key + "'");
  }
}

}  // namespace

ModelDescriptor make_model(const std::string& name,
                           const std::map<std::string, cplx>& params) {
  if (name == "shifted_oscillator") {
    reject_unknown_keys(params, {"alpha", "beta"});
    return shifted_oscillator(param_or_zero(params, "alpha"), param_or_zero(params, "beta"));
  }
  if (name == "shifted_square_well") {
    reject_unknown_keys(params, {"alpha", "beta"});
    return shifted_square_well(param_or_zero(params, "alpha"), param_or_zero(params, "beta"));
  }
  if (name == "squeezed") {
    reject_unknown_keys(params, {"r", "theta"});
    return squeezed(real_param(params, "r"), real_param(params, "theta"));
  }
  if (name == "double_translation") {
    reject_unknown_keys(params, {"alpha", "beta", "gamma", "delta"});
    return double_translation(param_or_zero(params, "alpha"), param_or_zero(params, "beta"),
                              param_or_zero(params, "gamma"), param_or_zero(params, "delta"));
  }
  std::string valid;
  for (const std::string& m : available_models()) valid += (valid.empty() ? "" : ", ") + m;
  throw UnknownModelError("unknown model '" + name + "'; valid models: " + valid);
}

std::vector<std::string> available_models() {
  return {"shifted_oscillator", "shifted_square_well", "squeezed", "double_translation"};
}

}  // namespace htridiag::models
