#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "jumpcode/codes.hpp"
#include "oracle.hpp"

using namespace jumpcode;

namespace {

// The three complementary-pair codewords on four qubits, by content.
StateVector pair_word(const std::string& a, const std::string& b) {
  const double r = 1.0 / std::sqrt(2.0);
  return make_state(static_cast<int>(a.size()),
                    {{a, Complex{r, 0.0}}, {b, Complex{r, 0.0}}});
}

bool same_state(const StateVector& x, const StateVector& y, double tol) {
  return oracle::max_diff(oracle::from_sparse(x), y) < tol;
}

}  // namespace

TEST(DfsBasis, CountsAndOrdering) {
  for (int n : {2, 4, 6, 8}) {
    const auto basis = dfs_basis(n);
    EXPECT_EQ(basis.size(), binomial(n, n / 2));
    for (std::size_t i = 0; i < basis.size(); ++i) {
      EXPECT_EQ(basis[i].excitation_count(), n / 2);
      if (i > 0) EXPECT_LT(basis[i - 1], basis[i]);
    }
  }
  EXPECT_THROW(dfs_basis(3), OddLengthUnsupported);
  EXPECT_THROW(dfs_basis(0), OddLengthUnsupported);
}

TEST(Build1jc, FourQubitContentMatchesClosedForm) {
  const Codebook cb = build_1jc(4);
  EXPECT_EQ(cb.n, 4);
  EXPECT_EQ(cb.k, 2);
  EXPECT_EQ(cb.l(), 3);
  EXPECT_EQ(cb.label, "1-JC(4,2,3)");
  cb.validate();

  // Pairs keyed by their smaller member in ascending order.
  EXPECT_TRUE(same_state(cb.codewords[0], pair_word("0011", "1100"), 1e-15));
  EXPECT_TRUE(same_state(cb.codewords[1], pair_word("0101", "1010"), 1e-15));
  EXPECT_TRUE(same_state(cb.codewords[2], pair_word("0110", "1001"), 1e-15));
}

TEST(Build1jc, GeneralStructure) {
  for (int n : {2, 4, 6, 8}) {
    const Codebook cb = build_1jc(n);
    EXPECT_EQ(static_cast<std::uint64_t>(cb.l()), binomial(n, n / 2) / 2);
    cb.validate();
    for (const auto& word : cb.codewords) {
      ASSERT_EQ(word.term_count(), 2u);
      const auto first = word.terms().begin();
      const auto second = std::next(first);
      EXPECT_EQ(first->first.complement(), second->first);
      EXPECT_NEAR(first->second.real(), 1.0 / std::sqrt(2.0), 1e-15);
      EXPECT_NEAR(second->second.real(), 1.0 / std::sqrt(2.0), 1e-15);
    }
  }
  EXPECT_THROW(build_1jc(5), OddLengthUnsupported);
}

TEST(CodebookValidate, RejectsBadBooks) {
  Codebook cb = build_1jc(4);
  cb.k = 3;  // excitation count no longer matches
  EXPECT_THROW(cb.validate(), InvalidParameters);

  Codebook dup = build_1jc(4);
  dup.codewords.push_back(dup.codewords.front());  // not orthogonal
  EXPECT_THROW(dup.validate(), InvalidParameters);

  Codebook empty;
  empty.n = 2;
  empty.k = 1;
  EXPECT_THROW(empty.validate(), InvalidParameters);
}

TEST(VerifyDetectedJump, SingleJumpConditionsHold) {
  for (int n : {2, 4, 6, 8}) {
    const double kappa = 0.8;
    const DecayModel model(n, kappa);
    const ConditionReport report =
        verify_detected_jump(build_1jc(n), 1, model);
    EXPECT_TRUE(report.pass);
    EXPECT_LT(report.max_deviation, 1e-10);
    EXPECT_EQ(report.patterns.size(), static_cast<std::size_t>(n));
    for (const auto& pc : report.patterns) {
      EXPECT_NEAR(pc.lambda, kappa / 2.0, 1e-12);  // Lambda_alpha = kappa/2
      EXPECT_TRUE(pc.pass);
      EXPECT_FALSE(pc.repeated);
    }
  }
}

TEST(VerifyDetectedJump, GramMatchesDenseOracle) {
  // Cross-check every single-jump Gram entry against the dense oracle.
  const Codebook cb = build_1jc(4);
  const double kappa = 1.7;
  const DecayModel model(4, kappa);
  const ConditionReport report = verify_detected_jump(cb, 1, model);
  for (const auto& pc : report.patterns) {
    const int alpha = pc.pattern.at(0);
    std::vector<oracle::Dense> images;
    for (const auto& w : cb.codewords)
      images.push_back(
          oracle::apply_lower(oracle::from_sparse(w), alpha, kappa, 4));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const Complex want =
            oracle::dot(images[static_cast<std::size_t>(i)],
                        images[static_cast<std::size_t>(j)]);
        EXPECT_NEAR(std::abs(pc.gram[static_cast<std::size_t>(i)]
                                    [static_cast<std::size_t>(j)] -
                             want),
                    0.0, 1e-13);
      }
  }
}

TEST(VerifyDetectedJump, FourQubitsFailAtTwoJumps) {
  const DecayModel model(4, 1.0);
  const ConditionReport report =
      verify_detected_jump(build_1jc(4), 2, model);
  EXPECT_FALSE(report.pass);
  EXPECT_FALSE(report.worst_pattern.empty());
  EXPECT_EQ(report.worst_pattern.size(), 2u);
  EXPECT_GT(report.max_deviation, 0.1);

  // The failure mode is unequal diagonals: for e = (2,4) only the pair
  // {0101, 1010} survives both jumps, so the Gram diagonal is
  // (0, kappa^2/2, 0) in build order while every off-diagonal vanishes.
  bool found = false;
  for (const auto& pc : report.patterns) {
    if (pc.pattern != JumpPattern{2, 4}) continue;
    found = true;
    EXPECT_FALSE(pc.pass);
    EXPECT_NEAR(pc.gram[0][0].real(), 0.0, 1e-13);
    EXPECT_NEAR(pc.gram[1][1].real(), 0.5, 1e-13);
    EXPECT_NEAR(pc.gram[2][2].real(), 0.0, 1e-13);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j)
          EXPECT_NEAR(std::abs(pc.gram[static_cast<std::size_t>(i)]
                                      [static_cast<std::size_t>(j)]),
                      0.0, 1e-13);
    EXPECT_NEAR(pc.lambda, 0.5 / 3.0, 1e-13);
    EXPECT_NEAR(pc.max_deviation, 0.5 - 0.5 / 3.0, 1e-13);
  }
  EXPECT_TRUE(found);

  // Repeated positions annihilate and are reported as trivially satisfied.
  for (const auto& pc : report.patterns)
    if (pc.repeated) {
      EXPECT_TRUE(pc.pass);
      EXPECT_NEAR(pc.lambda, 0.0, 1e-15);
    }
  EXPECT_THROW(verify_detected_jump(build_1jc(4), 0, model),
               InvalidParameters);
  EXPECT_THROW(verify_detected_jump(build_1jc(4), 1, DecayModel(2, 1.0)),
               DimensionMismatch);
}

TEST(VerifyFullKnill, UnknownPositionConditionsAreViolated) {
  const double kappa = 2.0;
  const DecayModel model(4, kappa);
  const Codebook cb = build_1jc(4);
  const FullKnillReport report = verify_full_knill(cb, model);
  EXPECT_FALSE(report.pass);
  EXPECT_FALSE(report.violations.empty());

  // <c0| L4^dag L2 |c1> = <c0| L3^dag L1 |c1> = kappa/2 with the published
  // codeword labels; the second build codeword is that |c1>.
  const auto entry = [&](int alpha, int beta) {
    for (const auto& pc : report.pairs)
      if (pc.alpha == alpha && pc.beta == beta) return pc.gram[0][2];
    ADD_FAILURE() << "pair (" << alpha << "," << beta << ") missing";
    return Complex{0.0, 0.0};
  };
  EXPECT_NEAR(std::abs(entry(4, 2) - Complex{kappa / 2.0, 0.0}), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(entry(3, 1) - Complex{kappa / 2.0, 0.0}), 0.0, 1e-12);

  // Same-position pairs are exactly the detected-jump conditions and pass.
  for (const auto& pc : report.pairs)
    if (pc.alpha == pc.beta) {
      EXPECT_TRUE(pc.pass);
      EXPECT_NEAR(std::abs(pc.lambda - Complex{kappa / 2.0, 0.0}), 0.0,
                  1e-12);
    }
}

TEST(DimensionBound, ClosedFormAndOptimality) {
  for (int n : {2, 4, 6, 8, 10}) {
    const std::uint64_t bound = dimension_bound(n, n / 2, 1);
    EXPECT_EQ(bound, binomial(n - 1, n / 2 - 1));
    EXPECT_EQ(static_cast<std::uint64_t>(build_1jc(n).l()), bound);
  }
  EXPECT_EQ(dimension_bound(9, 3, 2), 7u);
  EXPECT_EQ(dimension_bound(4, 2, 2), 1u);
  EXPECT_THROW(dimension_bound(4, 5, 1), InvalidParameters);
  EXPECT_THROW(dimension_bound(4, 2, 3), InvalidParameters);
  EXPECT_THROW(dimension_bound(4, 2, -1), InvalidParameters);
}

TEST(LogicalQubitCount, MatchesExactBinomials) {
  EXPECT_NEAR(logical_qubit_count(2), 0.0, 1e-15);
  EXPECT_NEAR(logical_qubit_count(4), std::log2(3.0), 1e-15);
  EXPECT_NEAR(logical_qubit_count(8), std::log2(35.0), 1e-15);
  for (int n = 2; n <= 64; n += 2)
    EXPECT_NEAR(logical_qubit_count(n),
                std::log2(static_cast<double>(binomial(n, n / 2) / 2)),
                1e-12);
  EXPECT_THROW(logical_qubit_count(5), OddLengthUnsupported);
}

TEST(Optimality, NoFourWordCodeFromPairStatesOnFourQubits) {
  // Exhaustive check backing the bound l <= C(n-1, n/2-1) = 3 at n = 4:
  // no 4 orthonormal states drawn from the +/- complementary-pair family
  // satisfy the single-jump conditions.
  const DecayModel model(4, 1.0);
  std::vector<StateVector> family;
  for (const BasisState& b : dfs_basis(4)) {
    const BasisState comp = b.complement();
    if (b.bits() > comp.bits()) continue;
    const double r = 1.0 / std::sqrt(2.0);
    StateVector::TermMap plus, minus;
    plus.emplace(b, Complex{r, 0.0});
    plus.emplace(comp, Complex{r, 0.0});
    minus.emplace(b, Complex{r, 0.0});
    minus.emplace(comp, Complex{-r, 0.0});
    family.emplace_back(4, std::move(plus));
    family.emplace_back(4, std::move(minus));
  }
  ASSERT_EQ(family.size(), 6u);

  int passing = 0;
  for (std::size_t a = 0; a < family.size(); ++a)
    for (std::size_t b = a + 1; b < family.size(); ++b)
      for (std::size_t c = b + 1; c < family.size(); ++c)
        for (std::size_t d = c + 1; d < family.size(); ++d) {
          Codebook cb;
          cb.n = 4;
          cb.k = 2;
          cb.codewords = {family[a], family[b], family[c], family[d]};
          try {
            cb.validate();
          } catch (const InvalidParameters&) {
            continue;  // not even orthonormal
          }
          if (verify_detected_jump(cb, 1, model).pass) ++passing;
        }
  EXPECT_EQ(passing, 0);
}
