#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "jumpcode/state.hpp"

namespace jumpcode {

/// Per-qubit spontaneous-decay rates kappa_alpha (units 1/time) for n qubits
/// decaying into statistically independent reservoirs. The coherent part of
/// the dynamics is fixed to H = 0, which makes the no-jump evolution
/// diagonal in the computational basis.
class DecayModel {
 public:
  DecayModel(int n, double kappa) : rates_(static_cast<std::size_t>(n), kappa) {
    validate();
  }

  explicit DecayModel(std::vector<double> rates) : rates_(std::move(rates)) {
    validate();
  }

  int n() const { return static_cast<int>(rates_.size()); }

  double rate(int alpha) const {
    check_index(alpha);
    return rates_[static_cast<std::size_t>(alpha - 1)];
  }

  const std::vector<double>& rates() const { return rates_; }

  double max_rate() const {
    return *std::max_element(rates_.begin(), rates_.end());
  }

  /// True iff the relative spread of the rates is below 1e-12.
  bool equal_rates() const {
    double lo = *std::min_element(rates_.begin(), rates_.end());
    double hi = max_rate();
    if (hi == 0.0) return true;
    return (hi - lo) / hi < 1e-12;
  }

  /// Sum of kappa_alpha over the excited qubits of b: the decay weight that
  /// the non-hermitian evolution applies to this basis state.
  double excited_weight(const BasisState& b) const {
    if (b.n() != n())
      throw DimensionMismatch("basis state length does not match model");
    double w = 0.0;
    for (int alpha = 1; alpha <= n(); ++alpha)
      if (b.bit(alpha)) w += rates_[static_cast<std::size_t>(alpha - 1)];
    return w;
  }

 private:
  void validate() const {
    if (rates_.empty() || rates_.size() > BasisState::max_qubits)
      throw InvalidParameters("decay model needs 1..64 qubits");
    for (double k : rates_)
      if (!(k >= 0.0)) throw InvalidParameters("decay rates must be >= 0");
  }

  void check_index(int alpha) const {
    if (alpha < 1 || alpha > n())
      throw InvalidQubitIndex("qubit index " + std::to_string(alpha) +
                              " out of range for n=" + std::to_string(n()));
  }

  std::vector<double> rates_;
};

/// Ordered list of jump positions (alpha_1, ..., alpha_m); the error
/// operator is the product L_{alpha_m} ... L_{alpha_1}.
using JumpPattern = std::vector<int>;

inline bool has_repeated_position(const JumpPattern& e) {
  JumpPattern s = e;
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) != s.end();
}

/// L_alpha = sqrt(kappa_alpha) |0><1| on qubit alpha. Result is unnormalized
/// and may be the zero vector.
inline StateVector apply_jump(const StateVector& psi, int alpha,
                              const DecayModel& model) {
  if (psi.n() != model.n())
    throw DimensionMismatch("state and decay model disagree on n");
  const double k = model.rate(alpha);
  const double f = std::sqrt(k);
  StateVector::TermMap map;
  for (const auto& [b, a] : psi.terms())
    if (b.bit(alpha)) map.emplace(b.with_bit(alpha, false), a * f);
  return StateVector(psi.n(), std::move(map), /*prune=*/false);
}

/// L_e = L_{alpha_m} ... L_{alpha_1}: jumps applied left to right along the
/// pattern. The empty pattern is the identity.
inline StateVector apply_pattern(const StateVector& psi, const JumpPattern& e,
                                 const DecayModel& model) {
  StateVector out = psi;
  for (int alpha : e) out = apply_jump(out, alpha, model);
  return out;
}

/// No-jump conditional evolution under the effective Hamiltonian
/// H_eff = -(i/2) sum_alpha L_alpha^dag L_alpha (H = 0, hbar = 1): each
/// basis term is scaled by exp(-w_b t / 2) where w_b is the excited weight.
/// The result is unnormalized; its squared norm is the no-jump survival
/// probability.
inline StateVector conditional_evolve(const StateVector& psi, double t,
                                      const DecayModel& model) {
  if (!(t >= 0.0)) throw InvalidDuration("evolution time must be >= 0");
  if (psi.n() != model.n())
    throw DimensionMismatch("state and decay model disagree on n");
  StateVector::TermMap map;
  for (const auto& [b, a] : psi.terms())
    map.emplace(b, a * std::exp(-0.5 * model.excited_weight(b) * t));
  return StateVector(psi.n(), std::move(map), /*prune=*/false);
}

/// Squared norm of conditional_evolve(psi, t) without materializing it.
inline double survival_probability(const StateVector& psi, double t,
                                   const DecayModel& model) {
  if (!(t >= 0.0)) throw InvalidDuration("evolution time must be >= 0");
  double s = 0.0;
  for (const auto& [b, a] : psi.terms())
    s += std::norm(a) * std::exp(-model.excited_weight(b) * t);
  return s;
}

/// Dense density matrix over n <= 6 qubits; the independent integration
/// target for the master equation and the oracle for trajectory averages.
class DensityMatrix {
 public:
  static constexpr int max_qubits = 6;

  explicit DensityMatrix(int n)
      : n_(check(n)),
        dim_(std::size_t{1} << n),
        entries_(dim_ * dim_, Complex{0.0, 0.0}) {}

  static DensityMatrix from_pure(const StateVector& psi) {
    DensityMatrix rho(psi.n());
    for (const auto& [br, ar] : psi.terms())
      for (const auto& [bc, ac] : psi.terms())
        rho.at(br.bits(), bc.bits()) = ar * std::conj(ac);
    return rho;
  }

  int n() const { return n_; }
  std::size_t dim() const { return dim_; }

  Complex& at(std::uint64_t row, std::uint64_t col) {
    return entries_[row * dim_ + col];
  }
  const Complex& at(std::uint64_t row, std::uint64_t col) const {
    return entries_[row * dim_ + col];
  }

  const std::vector<Complex>& entries() const { return entries_; }
  std::vector<Complex>& entries() { return entries_; }

  Complex trace() const {
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < dim_; ++i) t += entries_[i * dim_ + i];
    return t;
  }

  double hermiticity_deviation() const {
    double d = 0.0;
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c)
        d = std::max(d, std::abs(entries_[r * dim_ + c] -
                                 std::conj(entries_[c * dim_ + r])));
    return d;
  }

 private:
  static int check(int n) {
    if (n < 1 || n > max_qubits)
      throw TooLargeForOracle("dense density matrices support n <= " +
                              std::to_string(max_qubits));
    return n;
  }

  int n_;
  std::size_t dim_;
  std::vector<Complex> entries_;
};

namespace detail {

// Right-hand side of the master equation with H = 0:
// drho = sum_alpha kappa_alpha ( sigma-_a rho sigma+_a
//                                - {P_a, rho} / 2 )   with P_a = |1><1|_a.
inline void lindblad_rhs(const DensityMatrix& rho, const DecayModel& model,
                         DensityMatrix& out) {
  const std::size_t dim = rho.dim();
  const int n = rho.n();
  std::fill(out.entries().begin(), out.entries().end(), Complex{0.0, 0.0});
  for (int alpha = 1; alpha <= n; ++alpha) {
    const double k = model.rate(alpha);
    if (k == 0.0) continue;
    const std::uint64_t bit = std::uint64_t{1} << (n - alpha);
    for (std::uint64_t r = 0; r < dim; ++r) {
      const bool r1 = r & bit;
      for (std::uint64_t c = 0; c < dim; ++c) {
        const bool c1 = c & bit;
        Complex v{0.0, 0.0};
        if (!r1 && !c1) v += rho.at(r | bit, c | bit);
        v -= 0.5 * (static_cast<double>(r1) + static_cast<double>(c1)) *
             rho.at(r, c);
        out.at(r, c) += k * v;
      }
    }
  }
}

}  // namespace detail

/// Classical fixed-step RK4 integration of the master equation from 0 to
/// t_end. A step above 0.1 / max(kappa) is rejected as too coarse.
inline DensityMatrix master_rk4(const DensityMatrix& rho,
                                const DecayModel& model, double t_end,
                                double h) {
  if (rho.n() != model.n())
    throw DimensionMismatch("density matrix and decay model disagree on n");
  if (!(t_end >= 0.0)) throw InvalidDuration("t_end must be >= 0");
  if (!(h > 0.0)) throw InvalidParameters("step size must be > 0");
  const double kmax = model.max_rate();
  if (kmax > 0.0 && h > 0.1 / kmax)
    throw StepTooLarge("RK4 step exceeds 0.1 / max(kappa)");

  DensityMatrix state = rho;
  DensityMatrix k1(rho.n()), k2(rho.n()), k3(rho.n()), k4(rho.n()),
      tmp(rho.n());
  const std::size_t total = state.entries().size();

  double t = 0.0;
  while (t < t_end) {
    const double step = std::min(h, t_end - t);
    detail::lindblad_rhs(state, model, k1);
    for (std::size_t i = 0; i < total; ++i)
      tmp.entries()[i] = state.entries()[i] + 0.5 * step * k1.entries()[i];
    detail::lindblad_rhs(tmp, model, k2);
    for (std::size_t i = 0; i < total; ++i)
      tmp.entries()[i] = state.entries()[i] + 0.5 * step * k2.entries()[i];
    detail::lindblad_rhs(tmp, model, k3);
    for (std::size_t i = 0; i < total; ++i)
      tmp.entries()[i] = state.entries()[i] + step * k3.entries()[i];
    detail::lindblad_rhs(tmp, model, k4);
    for (std::size_t i = 0; i < total; ++i)
      state.entries()[i] +=
          (step / 6.0) * (k1.entries()[i] + 2.0 * k2.entries()[i] +
                          2.0 * k3.entries()[i] + k4.entries()[i]);
    t += step;
  }
  return state;
}

}  // namespace jumpcode
