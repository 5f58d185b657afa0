#include "htridiag/recurrence.hpp"

#include <cmath>
#include <functional>

namespace htridiag {

namespace {

constexpr double kPivotFloor = 1e-300;
constexpr double kGrowthBound = 1e150;
constexpr double kPairingFloor = 1e-14;
constexpr std::size_t kMillerBuffer0 = 32;
constexpr std::size_t kMillerBufferCap = 4096;

// The row-l relation shared by every run:
//   p_{l+h} up(l) + p_l diag(l) + p_{l-h} down(l) = E p_l,
// with p_0 = 1 and p_l = 0 for 0 < l < h. Right runs use
// (up, down) = (b'_l, b_l); left runs feed the mirrored sequences
// (b_{l+h}, b'_{l-h}) and conjugate the output, so a symmetric band performs
// bitwise-identical arithmetic on both sides.
struct ThreeTermSeqs {
  std::function<cplx(std::size_t)> diag;
  std::function<cplx(std::size_t)> up;
  std::function<cplx(std::size_t)> down;
};

// Forward evaluation. Exact for terminating solutions (pure raising or
// diagonal bands) but unstable whenever the wanted solution decays; used only
// when the lower coefficient chain has a structural zero and the backward
// pass cannot run. A vanishing divisor with an exactly zero numerator
// continues the minimal solution with zeros.
std::vector<cplx> forward_pass(const ThreeTermSeqs& seqs, cplx energy, std::size_t n,
                               std::size_t h) {
  std::vector<cplx> r(n, cplx(0.0, 0.0));
  r[0] = cplx(1.0, 0.0);
  for (std::size_t l = 0; l + h < n; ++l) {
    cplx num = r[l] * (energy - seqs.diag(l));
    if (l >= h) num -= r[l - h] * seqs.down(l);
    const cplx div = seqs.up(l);
    if (std::abs(div) <= kPivotFloor) {
      if (std::abs(num) == 0.0) {
        r[l + h] = cplx(0.0, 0.0);
        continue;
      }
      throw ZeroPivotError("recurrence: divisor at step " + std::to_string(l) +
                           " vanishes with nonzero numerator (reducible band?)");
    }
    const cplx next = num / div;
    if (std::abs(next) > kGrowthBound)
      throw GrowthDiagnostic("recurrence: coefficient at index " + std::to_string(l + h) +
                                 " exceeds the growth bound; the supplied energy is in the "
                                 "dominant-solution regime",
                             l + h, std::abs(next));
    r[l + h] = next;
  }
  return r;
}

// One backward (Miller) pass: seed far above the window, recurse down, then
// normalize to p_0 = 1. Stable for the decaying solution, which is the
// eigenvector expansion whenever the energy lies in the point spectrum.
std::vector<cplx> backward_pass(const ThreeTermSeqs& seqs, cplx energy, std::size_t n,
                                std::size_t h, std::size_t buffer) {
  std::size_t top = n - 1 + buffer;
  top -= top % h;  // keep index 0 on the seeded residue chain
  std::vector<cplx> trial(top + 1, cplx(0.0, 0.0));
  trial[top] = cplx(1.0, 0.0);
  for (std::size_t l = top; l >= h; --l) {
    cplx num = trial[l] * (energy - seqs.diag(l));
    if (l + h <= top) num -= trial[l + h] * seqs.up(l);
    trial[l - h] = num / seqs.down(l);
    const double mag = std::abs(trial[l - h]);
    if (mag > kGrowthBound) {
      const double rescale = 1.0 / mag;
      for (std::size_t j = l - h; j <= top; ++j) trial[j] *= rescale;
    }
  }
  if (std::abs(trial[0]) == 0.0)
    throw GrowthDiagnostic("recurrence: leading coefficient of the minimal solution "
                           "vanishes; this energy is unreachable with the p_0 = 1 seeding",
                           0, 0.0);
  std::vector<cplx> out(n);
  double worst = 0.0;
  std::size_t worst_index = 0;
  for (std::size_t l = 0; l < n; ++l) {
    out[l] = trial[l] / trial[0];
    const double mag = std::abs(out[l]);
    if (mag > worst) {
      worst = mag;
      worst_index = l;
    }
  }
  if (worst > kGrowthBound)
    throw GrowthDiagnostic("recurrence: coefficient at index " + std::to_string(worst_index) +
                               " exceeds the growth bound; the supplied energy is in the "
                               "dominant-solution regime",
                           worst_index, worst);
  return out;
}

bool coefficients_agree(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double scale = 0.0;
  for (const cplx& v : b) scale = std::max(scale, std::abs(v));
  for (std::size_t l = 0; l < a.size(); ++l) {
    const double dev = std::abs(a[l] - b[l]);
    if (dev > 1e-13 * std::max(std::abs(a[l]), std::abs(b[l])) + 1e-15 * scale) return false;
  }
  return true;
}

std::vector<cplx> run_three_term(const ThreeTermSeqs& seqs, cplx energy, std::size_t n,
                                 std::size_t h) {
  if (n < h + 1)
    throw DimensionError("recurrence: truncation length must be at least h + 1");
  // The backward pass divides by the lower chain; any structural zero there
  // routes the run through the forward pass instead. The scan covers the
  // largest window a backward attempt could use, so the path choice does not
  // depend on how many refinements run.
  std::size_t scan_top = n - 1 + kMillerBufferCap;
  scan_top -= scan_top % h;
  bool backward_ok = true;
  for (std::size_t l = h; l <= scan_top && backward_ok; ++l)
    backward_ok = std::abs(seqs.down(l)) > kPivotFloor;
  if (!backward_ok) return forward_pass(seqs, energy, n, h);

  std::vector<cplx> prev = backward_pass(seqs, energy, n, h, kMillerBuffer0);
  for (std::size_t buffer = 2 * kMillerBuffer0; buffer <= kMillerBufferCap; buffer *= 2) {
    std::vector<cplx> cur = backward_pass(seqs, energy, n, h, buffer);
    if (coefficients_agree(prev, cur)) return cur;
    prev = std::move(cur);
  }
  return prev;
}

EigenPacket right_run(const BandSpec& band, cplx energy, std::size_t n, OperatorSide side) {
  EigenPacket packet;
  packet.energy = energy;
  packet.side = side;
  ThreeTermSeqs seqs{[&band](std::size_t l) { return band.a(l); },
                     [&band](std::size_t l) { return band.bp(l); },
                     [&band](std::size_t l) { return band.b(l); }};
  packet.p = run_three_term(seqs, energy, n, band.h);
  return packet;
}

EigenPacket left_run(const BandSpec& band, cplx energy, std::size_t n, OperatorSide side) {
  EigenPacket packet;
  packet.energy = energy;
  packet.side = side;
  const std::size_t h = band.h;
  ThreeTermSeqs seqs{[&band](std::size_t l) { return band.a(l); },
                     [&band, h](std::size_t l) { return band.b(l + h); },
                     [&band, h](std::size_t l) { return band.bp(l - h); }};
  packet.p = run_three_term(seqs, energy, n, h);
  for (cplx& v : packet.p) v = std::conj(v);
  return packet;
}

}  // namespace

std::string to_string(OperatorSide side) {
  switch (side) {
    case OperatorSide::H: return "H";
    case OperatorSide::HDagger: return "H_dagger";
    case OperatorSide::HSusy: return "H_susy";
    case OperatorSide::HSusyDagger: return "H_susy_dagger";
  }
  return "H";
}

OperatorSide side_from_string(const std::string& name) {
  if (name == "H") return OperatorSide::H;
  if (name == "H_dagger") return OperatorSide::HDagger;
  if (name == "H_susy") return OperatorSide::HSusy;
  if (name == "H_susy_dagger") return OperatorSide::HSusyDagger;
  throw InvalidParameterError("unknown operator side: " + name);
}

EigenPacket run_recurrence_right(const BandSpec& band, cplx energy, std::size_t n) {
  return right_run(band, energy, n, OperatorSide::H);
}

EigenPacket run_recurrence_left(const BandSpec& band, cplx energy, std::size_t n) {
  return left_run(band, energy, n, OperatorSide::HDagger);
}

EigenPacket run_recurrence_susy(const BandSpec& susy, cplx energy, std::size_t n,
                                bool left_side) {
  return left_side ? left_run(susy, energy, n, OperatorSide::HSusyDagger)
                   : right_run(susy, energy, n, OperatorSide::HSusy);
}

std::pair<cplx, double> pairing_sum(const EigenPacket& right, const EigenPacket& left) {
  if (right.size() != left.size())
    throw DimensionError("pairing_sum: packets must share the truncation length");
  cplx sum(0.0, 0.0);
  double last_term = 0.0;
  const cplx scale = std::conj(right.c0) * left.c0;
  for (std::size_t k = 0; k < right.size(); ++k) {
    const cplx term = scale * std::conj(right.p[k]) * left.p[k];
    sum += term;
    if (std::abs(term) != 0.0) last_term = std::abs(term);
  }
  const double tail = std::abs(sum) > 0.0 ? last_term / std::abs(sum) : last_term;
  return {sum, tail};
}

NormalizedPair normalize_pair(const EigenPacket& right, const EigenPacket& left, double tol) {
  if (right.size() != left.size())
    throw DimensionError("normalize_pair: packets must share the truncation length");
  auto [incoming, tail] = pairing_sum(right, left);
  if (std::abs(incoming) <= kPairingFloor)
    throw DegeneratePairingError(
        "normalize_pair: truncated pairing has modulus " + std::to_string(std::abs(incoming)) +
        "; the pair is not normalizable at this truncation");

  NormalizedPair out{right, left, {}};
  out.record.tail_estimate = tail;
  if (std::abs(incoming - cplx(1.0, 0.0)) <= tol) {
    out.record.pairing = incoming;
    out.record.scale_choice = "kept input scales";
    return out;
  }

  // Raw pairing with unit scales; split its modulus evenly between the two
  // packets and put the whole phase on the right one.
  cplx raw(0.0, 0.0);
  for (std::size_t k = 0; k < right.size(); ++k)
    raw += std::conj(right.p[k]) * left.p[k];
  const double mod = std::abs(raw);
  out.right.c0 = raw / (mod * std::sqrt(mod));
  out.left.c0 = cplx(1.0 / std::sqrt(mod), 0.0);
  out.record.scale_choice = "left scale real positive, modulus split evenly";
  auto [achieved, tail2] = pairing_sum(out.right, out.left);
  out.record.pairing = achieved;
  out.record.tail_estimate = tail2;
  return out;
}

std::vector<std::vector<cplx>> biorthogonality_matrix(const std::vector<EigenPacket>& rights,
                                                      const std::vector<EigenPacket>& lefts) {
  std::vector<std::vector<cplx>> gram(rights.size(), std::vector<cplx>(lefts.size()));
  for (std::size_t n = 0; n < rights.size(); ++n)
    for (std::size_t m = 0; m < lefts.size(); ++m)
      gram[n][m] = pairing_sum(rights[n], lefts[m]).first;
  return gram;
}

cplx index_pairing_sum(const std::vector<EigenPacket>& rights,
                       const std::vector<EigenPacket>& lefts, std::size_t k, std::size_t l) {
  if (rights.size() != lefts.size())
    throw DimensionError("index_pairing_sum: packet lists must have equal length");
  cplx sum(0.0, 0.0);
  for (std::size_t n = 0; n < rights.size(); ++n) {
    if (k >= rights[n].size() || l >= lefts[n].size())
      throw DimensionError("index_pairing_sum: index beyond packet length");
    sum += std::conj(rights[n].c0 * rights[n].p[k]) * (lefts[n].c0 * lefts[n].p[l]);
  }
  return sum;
}

}  // namespace htridiag
