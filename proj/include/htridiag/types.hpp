#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace htridiag {

using cplx = std::complex<double>;

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};
struct InvalidParameterError : Error {
  using Error::Error;
};
struct UnsupportedBandError : Error {
  using Error::Error;
};
/// A recurrence divisor vanished while the numerator did not.
struct ZeroPivotError : Error {
  using Error::Error;
};
/// Recurrence coefficients exceeded the growth bound; the supplied energy is
/// not in the decaying-solution regime. Carries the offending index.
struct GrowthDiagnostic : Error {
  GrowthDiagnostic(const std::string& msg, std::size_t index, double magnitude)
      : Error(msg), index(index), magnitude(magnitude) {}
  std::size_t index;
  double magnitude;
};
struct GaugeBreakdownError : Error {
  using Error::Error;
};
struct RequiresLadderFormError : Error {
  using Error::Error;
};
struct ZeroDivisorError : Error {
  using Error::Error;
};
struct NotPseudoBosonicError : Error {
  using Error::Error;
};
struct DegeneratePairingError : Error {
  using Error::Error;
};
struct NoConvergenceError : Error {
  using Error::Error;
};
struct SingularShiftError : Error {
  using Error::Error;
};
struct UnknownModelError : Error {
  using Error::Error;
};

/// A total complex-valued sequence n -> z_n, evaluated lazily so that
/// consumers choose their own truncation order. Evaluation must be pure:
/// the same index always yields the same value.
class ComplexSeq {
 public:
  ComplexSeq() : fn_([](std::size_t) { return cplx(0.0, 0.0); }) {}

  explicit ComplexSeq(std::function<cplx(std::size_t)> fn, std::string label = {})
      : fn_(std::move(fn)), label_(std::move(label)) {}

  cplx operator()(std::size_t n) const { return fn_(n); }

  const std::string& label() const { return label_; }

  static ComplexSeq constant(cplx value, std::string label = {}) {
    return ComplexSeq([value](std::size_t) { return value; }, std::move(label));
  }

  static ComplexSeq zero() { return constant(cplx(0.0, 0.0), "0"); }

  /// Sequence backed by stored values; indices past the end evaluate to zero.
  static ComplexSeq from_values(std::vector<cplx> values, std::string label = {}) {
    auto store = std::make_shared<std::vector<cplx>>(std::move(values));
    return ComplexSeq(
        [store](std::size_t n) {
          return n < store->size() ? (*store)[n] : cplx(0.0, 0.0);
        },
        std::move(label));
  }

 private:
  std::function<cplx(std::size_t)> fn_;
  std::string label_;
};

}  // namespace htridiag
