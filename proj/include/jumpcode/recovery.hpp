#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "jumpcode/codes.hpp"
#include "jumpcode/rng.hpp"
#include "jumpcode/state.hpp"

namespace jumpcode {

/// Explicit gate realization of the recovery unitary for position alpha on
/// the complementary-pair code: a Hadamard on alpha, a flip of alpha, a
/// fan-out of CNOTs from alpha onto every other qubit, and a final flip.
inline GateList recovery_circuit(int alpha, int n) {
  if (n < 2) throw InvalidParameters("recovery circuit needs n >= 2");
  if (alpha < 1 || alpha > n)
    throw InvalidQubitIndex("recovery position " + std::to_string(alpha) +
                            " outside 1.." + std::to_string(n));
  GateList gates;
  gates.push_back(Gate::h(alpha));
  gates.push_back(Gate::x(alpha));
  for (int beta = 1; beta <= n; ++beta)
    if (beta != alpha) gates.push_back(Gate::cnot(alpha, beta));
  gates.push_back(Gate::x(alpha));
  return gates;
}

/// A recovery operation for one jump pattern. Either a gate list or an
/// isometry mapping an orthonormal frame (the normalized jumped codewords)
/// back onto the codewords. Values are immutable once built and safe to
/// share across trajectories.
class RecoveryMap {
 public:
  enum class Kind { Gates, Isometry };

  static RecoveryMap from_gates(JumpPattern e, int n, GateList gates) {
    RecoveryMap m;
    m.kind_ = Kind::Gates;
    m.pattern_ = std::move(e);
    m.n_ = n;
    m.gates_ = std::move(gates);
    return m;
  }

  static RecoveryMap from_isometry(JumpPattern e, int n,
                                   std::vector<StateVector> frame,
                                   std::vector<StateVector> targets) {
    if (frame.size() != targets.size() || frame.empty())
      throw InvalidParameters("isometry needs matching nonempty frames");
    RecoveryMap m;
    m.kind_ = Kind::Isometry;
    m.pattern_ = std::move(e);
    m.n_ = n;
    m.frame_ = std::move(frame);
    m.targets_ = std::move(targets);
    return m;
  }

  Kind kind() const { return kind_; }
  const JumpPattern& pattern() const { return pattern_; }
  int n() const { return n_; }
  const GateList& gates() const { return gates_; }
  const std::vector<StateVector>& frame() const { return frame_; }
  const std::vector<StateVector>& targets() const { return targets_; }

  StateVector apply(const StateVector& psi) const {
    if (psi.n() != n_)
      throw DimensionMismatch("recovery map and state disagree on n");
    if (kind_ == Kind::Gates) return apply_gates(psi, gates_);
    return apply_isometry(psi);
  }

 private:
  RecoveryMap() = default;

  // Isometry action: project onto the stored frame and replay the
  // coefficients on the targets. Any residual outside the frame is carried
  // through the deterministic unitary completion: both frames are extended
  // by Gram-Schmidt over computational basis states in canonical order and
  // matched index by index. The extension is generated on demand, so the
  // usual case (post-jump states, which lie inside the frame) never pays
  // for it.
  StateVector apply_isometry(const StateVector& psi) const {
    StateVector residual = psi;
    StateVector out(n_, {});
    for (std::size_t i = 0; i < frame_.size(); ++i) {
      const Complex coef = inner_product(frame_[i], psi);
      out = add(out, targets_[i], coef);
      residual = add(residual, frame_[i], -coef);
    }
    const double input_norm = psi.norm();
    if (residual.norm() <= 1e-12 * std::max(input_norm, 1.0)) return out;

    if (n_ > 20)
      throw RecoveryUnavailable(
          "state lies outside the recovery frame and the unitary completion "
          "is limited to n <= 20");
    std::vector<StateVector> src_ext = frame_;
    std::vector<StateVector> dst_ext = targets_;
    const std::uint64_t dim = std::uint64_t{1} << n_;
    std::uint64_t next_target = 0;
    for (std::uint64_t bits = 0; bits < dim; ++bits) {
      StateVector cand_src = complement_step(BasisState(n_, bits), src_ext);
      if (cand_src.is_zero()) continue;
      // Find the matching target extension vector: the next canonical basis
      // state with a usable component outside the current target span.
      StateVector cand_dst(n_, {});
      for (std::uint64_t tb = next_target; tb < dim; ++tb) {
        cand_dst = complement_step(BasisState(n_, tb), dst_ext);
        if (!cand_dst.is_zero()) {
          next_target = tb + 1;
          break;
        }
      }
      if (cand_dst.is_zero())
        throw RecoveryUnavailable("unitary completion exhausted target space");
      const Complex coef = inner_product(cand_src, residual);
      if (std::abs(coef) > 0.0) {
        out = add(out, cand_dst, coef);
        residual = add(residual, cand_src, -coef);
      }
      src_ext.push_back(std::move(cand_src));
      dst_ext.push_back(std::move(cand_dst));
      if (residual.norm() <= 1e-12 * std::max(input_norm, 1.0)) break;
    }
    return out;
  }

  // One Gram-Schmidt step with reorthogonalization: the component of |b>
  // orthogonal to the accepted frame, normalized, or a zero vector when the
  // candidate adds no usable direction.
  static StateVector complement_step(const BasisState& b,
                                     const std::vector<StateVector>& frame) {
    StateVector::TermMap seed;
    seed.emplace(b, Complex{1.0, 0.0});
    StateVector w(b.n(), std::move(seed));
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& f : frame) w = add(w, f, -inner_product(f, w));
    const double nrm = w.norm();
    if (nrm * nrm < 1e-6) return StateVector(b.n(), {});
    return scale(w, Complex{1.0 / nrm, 0.0});
  }

  Kind kind_ = Kind::Gates;
  JumpPattern pattern_;
  int n_ = 0;
  GateList gates_;
  std::vector<StateVector> frame_;
  std::vector<StateVector> targets_;
};

/// Builds the recovery for pattern e from first principles: the jumped
/// frame v_i = L_e|c_i> / sqrt(Lambda_e) must be orthonormal (that is the
/// correctability condition itself), and the recovery is the isometry
/// v_i -> |c_i>.
inline RecoveryMap synthesize_recovery(const Codebook& code,
                                       const JumpPattern& e,
                                       const DecayModel& model,
                                       double tol = 1e-10) {
  if (model.n() != code.n)
    throw DimensionMismatch("decay model and codebook disagree on n");
  std::vector<StateVector> frame;
  frame.reserve(code.codewords.size());
  double lambda = 0.0;
  for (const auto& c : code.codewords) {
    StateVector image = apply_pattern(c, e, model);
    lambda += image.norm_squared();
    frame.push_back(std::move(image));
  }
  lambda /= static_cast<double>(code.l());
  if (lambda < tol)
    throw JumpAnnihilatesCode("pattern sends every codeword to zero");
  const double inv = 1.0 / std::sqrt(lambda);
  for (auto& v : frame) v = scale(v, Complex{inv, 0.0});
  for (std::size_t i = 0; i < frame.size(); ++i)
    for (std::size_t j = i; j < frame.size(); ++j) {
      const Complex g = inner_product(frame[i], frame[j]);
      const double want = i == j ? 1.0 : 0.0;
      if (std::abs(g - Complex{want, 0.0}) > tol)
        throw NotRecoverable(
            "jumped codewords are not an orthonormal frame; the "
            "correctability condition fails for this pattern");
    }
  return RecoveryMap::from_isometry(e, code.n, std::move(frame),
                                    code.codewords);
}

/// Norm distance between two states after aligning the global phase of b
/// to a: || e^{-i arg<a|b>} b - a ||.
inline double phase_aligned_distance(const StateVector& a,
                                     const StateVector& b) {
  const Complex overlap = inner_product(a, b);
  // Residual computed term by term: the textbook closed form
  // sqrt(|a|^2 + |b|^2 - 2|<a|b>|) loses everything below sqrt(eps) to
  // cancellation, which would mask genuinely exact recoveries.
  const Complex phase = std::abs(overlap) > 0.0
                            ? Complex{std::conj(overlap) / std::abs(overlap)}
                            : Complex{1.0, 0.0};
  std::map<BasisState, Complex> residual;
  for (const auto& [basis, amp] : b.terms()) residual[basis] = phase * amp;
  for (const auto& [basis, amp] : a.terms()) residual[basis] -= amp;
  double d2 = 0.0;
  for (const auto& [basis, amp] : residual) d2 += std::norm(amp);
  return std::sqrt(d2);
}

/// Worst-case restoration error of `recovery` after pattern e: max over the
/// codewords and 20 random code-space superpositions of the phase-aligned
/// distance between recovery(normalize(L_e psi)) and psi.
inline double verify_left_inverse(const Codebook& code, const JumpPattern& e,
                                  const RecoveryMap& recovery,
                                  const DecayModel& model,
                                  std::uint64_t seed = 0x6a756d70636f6465ull) {
  if (model.n() != code.n)
    throw DimensionMismatch("decay model and codebook disagree on n");
  std::vector<StateVector> probes = code.codewords;
  UniformRng rng(splitmix64(seed));
  for (int r = 0; r < 20; ++r) {
    StateVector psi(code.n, {});
    for (const auto& c : code.codewords)
      psi = add(psi, c, Complex{rng.symmetric(), rng.symmetric()});
    probes.push_back(normalize(psi));
  }
  double worst = 0.0;
  for (const auto& psi : probes) {
    const StateVector jumped = apply_pattern(psi, e, model);
    if (jumped.norm() < 1e-150)
      throw JumpAnnihilatesCode("pattern annihilates a probe state");
    const StateVector restored = recovery.apply(normalize(jumped));
    worst = std::max(worst, phase_aligned_distance(psi, restored));
  }
  return worst;
}

/// Per-position recovery lookup used by the trajectory simulator.
class RecoveryProvider {
 public:
  void set(int alpha, RecoveryMap map) {
    maps_.insert_or_assign(alpha, std::move(map));
  }

  bool has(int alpha) const { return maps_.count(alpha) != 0; }

  const RecoveryMap& get(int alpha) const {
    auto it = maps_.find(alpha);
    if (it == maps_.end())
      throw RecoveryUnavailable("no recovery defined for position " +
                                std::to_string(alpha));
    return it->second;
  }

 private:
  std::map<int, RecoveryMap> maps_;
};

enum class RecoveryStrategy {
  Auto,        // gate circuit where it validates (n <= 4), synthesized else
  Circuit,     // force the gate circuit, validating it for each position
  Synthesized  // always build the isometry from the jumped frame
};

/// Builds recoveries for all single-jump positions of a codebook. The gate
/// circuit is the shipped default only up to n = 4; for larger codes the
/// synthesized isometry is used unless the circuit is forced explicitly
/// (it is validated either way and rejected if it fails to restore).
inline RecoveryProvider make_recovery_provider(
    const Codebook& code, const DecayModel& model,
    RecoveryStrategy strategy = RecoveryStrategy::Auto, double tol = 1e-10) {
  RecoveryProvider provider;
  for (int alpha = 1; alpha <= code.n; ++alpha) {
    const JumpPattern e{alpha};
    bool try_circuit = strategy == RecoveryStrategy::Circuit ||
                       (strategy == RecoveryStrategy::Auto && code.n <= 4);
    if (try_circuit) {
      RecoveryMap circuit =
          RecoveryMap::from_gates(e, code.n, recovery_circuit(alpha, code.n));
      const double dev = verify_left_inverse(code, e, circuit, model);
      if (dev < tol) {
        provider.set(alpha, std::move(circuit));
        continue;
      }
      if (strategy == RecoveryStrategy::Circuit)
        throw NotRecoverable("gate circuit fails to restore position " +
                             std::to_string(alpha) + " (deviation " +
                             std::to_string(dev) + ")");
    }
    provider.set(alpha, synthesize_recovery(code, e, model, tol));
  }
  return provider;
}

}  // namespace jumpcode
