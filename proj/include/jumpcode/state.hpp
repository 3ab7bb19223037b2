#pragma once

#include <cmath>
#include <complex>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jumpcode/basis.hpp"
#include "jumpcode/errors.hpp"

namespace jumpcode {

using Complex = std::complex<double>;

/// Sparse n-qubit state: a map from basis states to complex amplitudes.
///
/// Values are immutable after construction; every operation is a pure
/// function returning a new state. Amplitudes whose magnitude falls below
/// `drop_tolerance` are pruned by the accumulating constructor, which keeps
/// exact cancellations exact and guards against float dust. Scaling
/// operations (jumps, conditional evolution) never prune, since they can
/// produce legitimately tiny amplitudes.
class StateVector {
 public:
  static constexpr double drop_tolerance = 1e-14;

  using TermMap = std::map<BasisState, Complex>;

  explicit StateVector(int n) : n_(n) {
    if (n < 1 || n > BasisState::max_qubits)
      throw InvalidBasisState("qubit count out of range: " + std::to_string(n));
  }

  StateVector(int n, TermMap terms, bool prune = true)
      : n_(n), terms_(std::move(terms)) {
    if (n < 1 || n > BasisState::max_qubits)
      throw InvalidBasisState("qubit count out of range: " + std::to_string(n));
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (it->first.n() != n_)
        throw InvalidBasisState("basis state length " +
                                std::to_string(it->first.n()) +
                                " does not match n=" + std::to_string(n_));
      if (prune && std::abs(it->second) < drop_tolerance)
        it = terms_.erase(it);
      else
        ++it;
    }
  }

  int n() const { return n_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  Complex amplitude(const BasisState& b) const {
    auto it = terms_.find(b);
    return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
  }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& [b, a] : terms_) s += std::norm(a);
    return s;
  }

  double norm() const { return std::sqrt(norm_squared()); }

 private:
  int n_;
  TermMap terms_;
};

/// Gates needed by the recovery circuit: X, H and CNOT.
struct Gate {
  enum class Kind { X, H, Cnot };

  Kind kind;
  int q1 = 0;  // acted qubit for X/H, control for CNOT
  int q2 = 0;  // CNOT target

  static Gate x(int q) { return {Kind::X, q, 0}; }
  static Gate h(int q) { return {Kind::H, q, 0}; }
  static Gate cnot(int control, int target) {
    if (control == target)
      throw InvalidQubitIndex("CNOT control and target must differ");
    return {Kind::Cnot, control, target};
  }

  friend bool operator==(const Gate&, const Gate&) = default;
};

using GateList = std::vector<Gate>;

/// Builds the (unnormalized) superposition of the listed terms.
/// Duplicate basis states have their amplitudes summed.
inline StateVector make_state(
    int n, const std::vector<std::pair<std::string, Complex>>& terms) {
  StateVector::TermMap map;
  for (const auto& [s, a] : terms) {
    BasisState b = BasisState::from_string(s);
    if (b.n() != n)
      throw InvalidBasisState("basis string \"" + s +
                              "\" does not have length " + std::to_string(n));
    map[b] += a;
  }
  return StateVector(n, std::move(map));
}

inline StateVector make_state(
    int n, std::initializer_list<std::pair<std::string, Complex>> terms) {
  return make_state(n, std::vector<std::pair<std::string, Complex>>(terms));
}

/// <a|b>, conjugate-linear in the first argument.
inline Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.n() != b.n())
    throw DimensionMismatch("inner product between n=" + std::to_string(a.n()) +
                            " and n=" + std::to_string(b.n()));
  const auto& small = a.term_count() <= b.term_count() ? a : b;
  const auto& large = a.term_count() <= b.term_count() ? b : a;
  Complex s{0.0, 0.0};
  for (const auto& [basis, amp] : small.terms()) {
    Complex other = large.amplitude(basis);
    if (&small == &a)
      s += std::conj(amp) * other;
    else
      s += std::conj(other) * amp;
  }
  return s;
}

inline StateVector scale(const StateVector& psi, Complex factor) {
  StateVector::TermMap map;
  if (factor != Complex{0.0, 0.0})
    for (const auto& [b, a] : psi.terms()) map.emplace(b, a * factor);
  return StateVector(psi.n(), std::move(map), /*prune=*/false);
}

/// a + factor * b, pruned.
inline StateVector add(const StateVector& a, const StateVector& b,
                       Complex factor = Complex{1.0, 0.0}) {
  if (a.n() != b.n()) throw DimensionMismatch("adding states of different n");
  StateVector::TermMap map(a.terms());
  for (const auto& [basis, amp] : b.terms()) map[basis] += factor * amp;
  return StateVector(a.n(), std::move(map));
}

inline StateVector normalize(const StateVector& psi) {
  double nrm = psi.norm();
  if (nrm < 1e-150) throw NotNormalized("cannot normalize a zero vector");
  return scale(psi, Complex{1.0 / nrm, 0.0});
}

inline bool is_normalized(const StateVector& psi, double tol = 1e-9) {
  return std::abs(psi.norm() - 1.0) <= tol;
}

/// Applies a single gate. X flips the qubit, H is the Hadamard rotation and
/// CNOT flips the target iff the control is excited.
inline StateVector apply_gate(const StateVector& psi, const Gate& gate) {
  auto check = [&](int q) {
    if (q < 1 || q > psi.n())
      throw InvalidQubitIndex("gate qubit " + std::to_string(q) +
                              " out of range for n=" + std::to_string(psi.n()));
  };
  static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  StateVector::TermMap map;
  switch (gate.kind) {
    case Gate::Kind::X:
      check(gate.q1);
      for (const auto& [b, a] : psi.terms()) map[b.flipped(gate.q1)] += a;
      break;
    case Gate::Kind::H:
      check(gate.q1);
      for (const auto& [b, a] : psi.terms()) {
        // |0> -> (|0>+|1>)/sqrt2, |1> -> (|0>-|1>)/sqrt2
        const bool excited = b.bit(gate.q1);
        map[b.with_bit(gate.q1, false)] += a * inv_sqrt2;
        map[b.with_bit(gate.q1, true)] += excited ? -a * inv_sqrt2
                                                  : a * inv_sqrt2;
      }
      break;
    case Gate::Kind::Cnot:
      check(gate.q1);
      check(gate.q2);
      if (gate.q1 == gate.q2)
        throw InvalidQubitIndex("CNOT control and target must differ");
      for (const auto& [b, a] : psi.terms())
        map[b.bit(gate.q1) ? b.flipped(gate.q2) : b] += a;
      break;
  }
  return StateVector(psi.n(), std::move(map));
}

inline StateVector apply_gates(const StateVector& psi, const GateList& gates) {
  StateVector out = psi;
  for (const Gate& g : gates) out = apply_gate(out, g);
  return out;
}

/// |<a|b>|^2 for normalized states.
inline double fidelity(const StateVector& a, const StateVector& b) {
  if (a.n() != b.n())
    throw DimensionMismatch("fidelity between states of different n");
  if (!is_normalized(a) || !is_normalized(b))
    throw NotNormalized("fidelity requires normalized states");
  return std::norm(inner_product(a, b));
}

}  // namespace jumpcode
