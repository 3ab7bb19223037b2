#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "jumpcode/dynamics.hpp"
#include "jumpcode/state.hpp"

namespace jumpcode {

/// A detected-jump-correcting codebook: l orthonormal codewords over n
/// qubits, every basis term of every codeword carrying exactly k
/// excitations.
struct Codebook {
  int n = 0;
  int k = 0;
  std::string label;
  std::vector<StateVector> codewords;

  int l() const { return static_cast<int>(codewords.size()); }

  void validate(double tol = 1e-12) const {
    if (codewords.empty()) throw InvalidParameters("codebook needs l >= 1");
    for (const auto& c : codewords) {
      if (c.n() != n)
        throw DimensionMismatch("codeword qubit count does not match codebook");
      for (const auto& [b, a] : c.terms())
        if (b.excitation_count() != k)
          throw InvalidParameters("codeword term " + b.str() +
                                  " does not have excitation count " +
                                  std::to_string(k));
    }
    for (std::size_t i = 0; i < codewords.size(); ++i)
      for (std::size_t j = i; j < codewords.size(); ++j) {
        const Complex g = inner_product(codewords[i], codewords[j]);
        const double want = i == j ? 1.0 : 0.0;
        if (std::abs(g - Complex{want, 0.0}) > tol)
          throw InvalidParameters("codewords are not orthonormal");
      }
  }
};

/// All basis states with exactly n/2 excitations, lexicographically sorted:
/// the maximal decoherence-free subspace for equal rates and even n.
inline std::vector<BasisState> dfs_basis(int n) {
  if (n < 2 || n % 2 != 0)
    throw OddLengthUnsupported("the maximal DFS construction needs even n >= 2");
  std::vector<BasisState> out;
  out.reserve(binomial(n, n / 2));
  const std::uint64_t end = std::uint64_t{1} << n;
  for (std::uint64_t bits = 0; bits < end; ++bits)
    if (std::popcount(bits) == n / 2) out.emplace_back(n, bits);
  return out;
}

/// The optimal one-detected-jump code on even n: one codeword
/// (|b> + |b_complement>)/sqrt(2) per complementary pair of half-excited
/// basis states, pairs ordered by their lexicographically smaller member.
inline Codebook build_1jc(int n) {
  if (n < 2 || n % 2 != 0)
    throw OddLengthUnsupported("complementary-pair codes need even n >= 2");
  Codebook cb;
  cb.n = n;
  cb.k = n / 2;
  cb.label = "1-JC(" + std::to_string(n) + "," + std::to_string(n / 2) + "," +
             std::to_string(binomial(n, n / 2) / 2) + ")";
  static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (const BasisState& b : dfs_basis(n)) {
    const BasisState comp = b.complement();
    if (b.bits() > comp.bits()) continue;  // emit each pair once
    StateVector::TermMap map;
    map.emplace(b, Complex{inv_sqrt2, 0.0});
    map.emplace(comp, Complex{inv_sqrt2, 0.0});
    cb.codewords.emplace_back(n, std::move(map));
  }
  return cb;
}

/// One checked jump pattern: its Gram matrix <c_i|L_e^dag L_e|c_j>, the mean
/// diagonal value Lambda_e and the worst deviation from Lambda_e * delta_ij.
struct PatternCheck {
  JumpPattern pattern;
  bool repeated = false;  // representative of the annihilating repeat family
  double lambda = 0.0;
  double max_deviation = 0.0;
  bool pass = true;
  std::vector<std::vector<Complex>> gram;
  std::vector<int> class_block_counts;  // filled by the design-level checker
};

struct ConditionReport {
  int t = 0;
  double tolerance = 0.0;
  bool pass = false;
  double max_deviation = 0.0;
  JumpPattern worst_pattern;
  std::vector<PatternCheck> patterns;
};

namespace detail {

inline PatternCheck check_pattern(const Codebook& code, const JumpPattern& e,
                                  const DecayModel& model, double tol) {
  PatternCheck pc;
  pc.pattern = e;
  pc.repeated = has_repeated_position(e);
  const int l = code.l();
  std::vector<StateVector> images;
  images.reserve(code.codewords.size());
  for (const auto& c : code.codewords)
    images.push_back(apply_pattern(c, e, model));

  pc.gram.assign(l, std::vector<Complex>(l, Complex{0.0, 0.0}));
  double diag_sum = 0.0;
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      pc.gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          inner_product(images[static_cast<std::size_t>(i)],
                        images[static_cast<std::size_t>(j)]);
      if (i == j)
        diag_sum += pc.gram[static_cast<std::size_t>(i)]
                           [static_cast<std::size_t>(j)].real();
    }
  pc.lambda = diag_sum / l;
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      const Complex want =
          i == j ? Complex{pc.lambda, 0.0} : Complex{0.0, 0.0};
      pc.max_deviation = std::max(
          pc.max_deviation,
          std::abs(pc.gram[static_cast<std::size_t>(i)]
                          [static_cast<std::size_t>(j)] - want));
    }
  pc.pass = pc.max_deviation < tol;
  return pc;
}

template <typename Fn>
inline void for_each_distinct_pattern(int n, int t, Fn&& fn) {
  JumpPattern e;
  std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
  auto recurse = [&](auto&& self) -> void {
    if (!e.empty()) fn(e);
    if (static_cast<int>(e.size()) == t) return;
    for (int alpha = 1; alpha <= n; ++alpha) {
      if (used[static_cast<std::size_t>(alpha)]) continue;
      used[static_cast<std::size_t>(alpha)] = true;
      e.push_back(alpha);
      self(self);
      e.pop_back();
      used[static_cast<std::size_t>(alpha)] = false;
    }
  };
  recurse(recurse);
}

}  // namespace detail

/// Checks <c_i|L_e^dag L_e|c_j> = Lambda_e delta_ij for every jump pattern of
/// length 1..t. Patterns with repeated positions annihilate fixed-excitation
/// codewords after the first recurrence, so they are covered once per qubit
/// by the (alpha, alpha) representatives and reported with Lambda_e = 0.
inline ConditionReport verify_detected_jump(const Codebook& code, int t,
                                            const DecayModel& model,
                                            double tol = 1e-10) {
  if (model.n() != code.n)
    throw DimensionMismatch("decay model and codebook disagree on n");
  if (t < 1) throw InvalidParameters("pattern length bound t must be >= 1");
  ConditionReport report;
  report.t = t;
  report.tolerance = tol;
  report.pass = true;

  // Patterns ordered by length, then lexicographically; this order is the
  // stable key used to line reports up with design-level diagnostics.
  std::vector<JumpPattern> patterns;
  detail::for_each_distinct_pattern(code.n, t,
                                    [&](const JumpPattern& e) {
                                      patterns.push_back(e);
                                    });
  std::sort(patterns.begin(), patterns.end(),
            [](const JumpPattern& a, const JumpPattern& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  if (t >= 2)
    for (int alpha = 1; alpha <= code.n; ++alpha)
      patterns.push_back(JumpPattern{alpha, alpha});

  for (const JumpPattern& e : patterns) {
    PatternCheck pc = detail::check_pattern(code, e, model, tol);
    if (!pc.pass) report.pass = false;
    if (pc.max_deviation > report.max_deviation) {
      report.max_deviation = pc.max_deviation;
      report.worst_pattern = pc.pattern;
    }
    report.patterns.push_back(std::move(pc));
  }
  return report;
}

/// One ordered qubit pair of the full invertibility conditions
/// <c_i|L_alpha^dag L_beta|c_j> = Lambda_ab delta_ij.
struct PairCheck {
  int alpha = 0;
  int beta = 0;
  Complex lambda{0.0, 0.0};
  double max_deviation = 0.0;
  bool pass = true;
  std::vector<std::vector<Complex>> gram;
};

struct KnillViolation {
  int alpha = 0;
  int beta = 0;
  int i = 0;
  int j = 0;
  Complex value{0.0, 0.0};
};

struct FullKnillReport {
  double tolerance = 0.0;
  bool pass = false;
  std::vector<PairCheck> pairs;
  std::vector<KnillViolation> violations;
};

/// Evaluates the unknown-position invertibility conditions over all ordered
/// pairs (alpha, beta). Detected-jump codes are expected to fail this check
/// for alpha != beta; the report lists each violating matrix entry.
inline FullKnillReport verify_full_knill(const Codebook& code,
                                         const DecayModel& model,
                                         double tol = 1e-10) {
  if (model.n() != code.n)
    throw DimensionMismatch("decay model and codebook disagree on n");
  FullKnillReport report;
  report.tolerance = tol;
  report.pass = true;
  const int l = code.l();

  std::vector<std::vector<StateVector>> jumped;  // [alpha-1][i] = L_a |c_i>
  for (int alpha = 1; alpha <= code.n; ++alpha) {
    std::vector<StateVector> row;
    row.reserve(code.codewords.size());
    for (const auto& c : code.codewords)
      row.push_back(apply_jump(c, alpha, model));
    jumped.push_back(std::move(row));
  }

  for (int alpha = 1; alpha <= code.n; ++alpha)
    for (int beta = 1; beta <= code.n; ++beta) {
      PairCheck pc;
      pc.alpha = alpha;
      pc.beta = beta;
      pc.gram.assign(l, std::vector<Complex>(l, Complex{0.0, 0.0}));
      Complex diag_sum{0.0, 0.0};
      for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) {
          pc.gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
              inner_product(
                  jumped[static_cast<std::size_t>(alpha - 1)]
                        [static_cast<std::size_t>(i)],
                  jumped[static_cast<std::size_t>(beta - 1)]
                        [static_cast<std::size_t>(j)]);
          if (i == j)
            diag_sum += pc.gram[static_cast<std::size_t>(i)]
                               [static_cast<std::size_t>(j)];
        }
      pc.lambda = diag_sum / static_cast<double>(l);
      for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) {
          const Complex got = pc.gram[static_cast<std::size_t>(i)]
                                     [static_cast<std::size_t>(j)];
          const Complex want = i == j ? pc.lambda : Complex{0.0, 0.0};
          const double dev = std::abs(got - want);
          pc.max_deviation = std::max(pc.max_deviation, dev);
          if (dev > tol)
            report.violations.push_back({alpha, beta, i, j, got});
        }
      pc.pass = pc.max_deviation < tol;
      if (!pc.pass) report.pass = false;
      report.pairs.push_back(std::move(pc));
    }
  return report;
}

/// Maximum number of logical states of a code with k excitations correcting
/// t detected jumps: C(n - t, k - t).
inline std::uint64_t dimension_bound(int n, int k, int t) {
  if (t < 0 || k < t || n < k)
    throw InvalidParameters("dimension bound needs 0 <= t <= k <= n");
  return binomial(n - t, k - t);
}

/// log2 of the number of logical states of the complementary-pair code,
/// log2( C(n, n/2) / 2 ), from exact 64-bit binomials.
inline double logical_qubit_count(int n) {
  if (n < 2 || n % 2 != 0)
    throw OddLengthUnsupported("complementary-pair codes need even n >= 2");
  const std::uint64_t l = binomial(n, n / 2) / 2;
  return std::log2(static_cast<double>(l));
}

}  // namespace jumpcode
