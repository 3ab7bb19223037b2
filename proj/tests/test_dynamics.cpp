#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "jumpcode/codes.hpp"
#include "jumpcode/dynamics.hpp"
#include "oracle.hpp"

using namespace jumpcode;

namespace {

Eigen::MatrixXcd to_eigen(const DensityMatrix& rho) {
  const auto dim = static_cast<Eigen::Index>(rho.dim());
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c)
      m(r, c) = rho.at(static_cast<std::uint64_t>(r),
                       static_cast<std::uint64_t>(c));
  return m;
}

}  // namespace

TEST(DecayModel, AccessorsAndValidation) {
  const DecayModel equal(3, 2.0);
  EXPECT_EQ(equal.n(), 3);
  EXPECT_DOUBLE_EQ(equal.rate(1), 2.0);
  EXPECT_DOUBLE_EQ(equal.rate(3), 2.0);
  EXPECT_TRUE(equal.equal_rates());
  EXPECT_DOUBLE_EQ(equal.max_rate(), 2.0);

  const DecayModel uneven(std::vector<double>{1.0, 1.5});
  EXPECT_FALSE(uneven.equal_rates());
  EXPECT_DOUBLE_EQ(uneven.max_rate(), 1.5);

  EXPECT_THROW(DecayModel(0, 1.0), InvalidParameters);
  EXPECT_THROW(DecayModel(2, -1.0), InvalidParameters);
  EXPECT_THROW(DecayModel(std::vector<double>{}), InvalidParameters);
  EXPECT_THROW(equal.rate(0), InvalidQubitIndex);
  EXPECT_THROW(equal.rate(4), InvalidQubitIndex);
}

TEST(DecayModel, ExcitedWeight) {
  const DecayModel model(std::vector<double>{1.0, 2.0, 4.0});
  EXPECT_DOUBLE_EQ(model.excited_weight(BasisState::from_string("000")), 0.0);
  EXPECT_DOUBLE_EQ(model.excited_weight(BasisState::from_string("101")), 5.0);
  EXPECT_DOUBLE_EQ(model.excited_weight(BasisState::from_string("111")), 7.0);
}

TEST(Jumps, MatchDenseOracle) {
  for (int n = 1; n <= 5; ++n) {
    const StateVector psi = oracle::random_state(n, 500 + n);
    std::vector<double> rates;
    for (int a = 0; a < n; ++a) rates.push_back(0.5 + 0.25 * a);
    const DecayModel model(rates);
    const oracle::Dense dense = oracle::from_sparse(psi);
    for (int alpha = 1; alpha <= n; ++alpha)
      EXPECT_LT(oracle::max_diff(
                    oracle::apply_lower(dense, alpha,
                                        rates[static_cast<std::size_t>(
                                            alpha - 1)],
                                        n),
                    apply_jump(psi, alpha, model)),
                1e-13);
  }
}

TEST(Jumps, AnnihilationAndComposition) {
  const DecayModel model(2, 1.0);
  const StateVector ground = make_state(2, {{"00", Complex{1.0, 0.0}}});
  EXPECT_TRUE(apply_jump(ground, 1, model).is_zero());

  // L_2 L_1 |11> = |00>; repeating a position annihilates.
  const StateVector both = make_state(2, {{"11", Complex{1.0, 0.0}}});
  const StateVector seq = apply_pattern(both, {1, 2}, model);
  EXPECT_NEAR(
      std::abs(seq.amplitude(BasisState::from_string("00")) -
               Complex{1.0, 0.0}),
      0.0, 1e-15);
  EXPECT_TRUE(apply_pattern(both, {1, 1}, model).is_zero());
  EXPECT_TRUE(has_repeated_position({1, 1}));
  EXPECT_FALSE(has_repeated_position({1, 2}));

  // Empty pattern is the identity.
  const StateVector same = apply_pattern(both, {}, model);
  EXPECT_EQ(same.amplitude(BasisState::from_string("11")),
            (Complex{1.0, 0.0}));
}

TEST(Jumps, RateScaling) {
  const DecayModel model(std::vector<double>{4.0});
  const StateVector one = make_state(1, {{"1", Complex{1.0, 0.0}}});
  const StateVector jumped = apply_jump(one, 1, model);
  EXPECT_NEAR(jumped.amplitude(BasisState::from_string("0")).real(), 2.0,
              1e-15);  // sqrt(kappa)
}

TEST(ConditionalEvolution, MatchesDenseOracle) {
  for (int n = 1; n <= 5; ++n) {
    const StateVector psi = oracle::random_state(n, 600 + n);
    std::vector<double> rates;
    for (int a = 0; a < n; ++a) rates.push_back(0.3 + 0.2 * a);
    const DecayModel model(rates);
    for (double t : {0.0, 0.37, 2.5}) {
      EXPECT_LT(oracle::max_diff(
                    oracle::conditional(oracle::from_sparse(psi), rates, t, n),
                    conditional_evolve(psi, t, model)),
                1e-13);
      EXPECT_NEAR(survival_probability(psi, t, model),
                  conditional_evolve(psi, t, model).norm_squared(), 1e-13);
    }
  }
  EXPECT_THROW(
      conditional_evolve(oracle::random_state(1, 1), -0.1, DecayModel(1, 1.0)),
      InvalidDuration);
}

TEST(ConditionalEvolution, DfsStatesAreFixedUpToScale) {
  // Any state supported on n/2-excitation terms is an eigenvector of the
  // conditional evolution with eigenvalue exp(-kappa n t / 4) on amplitudes.
  for (int n : {2, 4, 6}) {
    const DecayModel model(n, 1.0);
    StateVector::TermMap map;
    UniformRng rng(splitmix64(static_cast<std::uint64_t>(n) + 77));
    for (const BasisState& b : dfs_basis(n))
      map.emplace(b, Complex{rng.symmetric(), rng.symmetric()});
    const StateVector psi = normalize(StateVector(n, std::move(map)));
    const double t = 0.8;
    const StateVector evolved = normalize(conditional_evolve(psi, t, model));
    EXPECT_LT(oracle::max_diff(oracle::from_sparse(psi), evolved), 1e-12);
    EXPECT_NEAR(survival_probability(psi, t, model),
                std::exp(-1.0 * (n / 2) * t), 1e-12);
  }
}

TEST(DensityMatrix, FromPureTraceHermiticity) {
  const StateVector psi = oracle::random_state(3, 9);
  const DensityMatrix rho = DensityMatrix::from_pure(psi);
  EXPECT_NEAR(std::abs(rho.trace() - Complex{1.0, 0.0}), 0.0, 1e-13);
  EXPECT_LT(rho.hermiticity_deviation(), 1e-15);
  EXPECT_GT(oracle::min_eigenvalue(to_eigen(rho)), -1e-12);
  EXPECT_THROW(DensityMatrix(7), TooLargeForOracle);
}

TEST(Lindblad, RhsMatchesIndependentDenseForm) {
  for (int n = 1; n <= 3; ++n) {
    std::vector<double> rates;
    for (int a = 0; a < n; ++a) rates.push_back(0.7 + 0.4 * a);
    const DecayModel model(rates);
    // Hermitian random test matrix (not necessarily a state): the RHS is
    // linear, so agreement here is agreement everywhere.
    const StateVector psi = oracle::random_state(n, 700 + n);
    const StateVector phi = oracle::random_state(n, 800 + n);
    DensityMatrix rho = DensityMatrix::from_pure(psi);
    const DensityMatrix rho2 = DensityMatrix::from_pure(phi);
    for (std::size_t i = 0; i < rho.entries().size(); ++i)
      rho.entries()[i] = 0.25 * rho.entries()[i] + 0.75 * rho2.entries()[i];

    DensityMatrix out(n);
    detail::lindblad_rhs(rho, model, out);
    const Eigen::MatrixXcd want = oracle::rhs_dense(to_eigen(rho), rates, n);
    const Eigen::MatrixXcd got = to_eigen(out);
    EXPECT_LT((want - got).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(MasterEquation, SingleQubitAnalytic) {
  // rho11(t) = e^{-kt} rho11(0); rho01(t) = e^{-kt/2} rho01(0);
  // rho00(t) = 1 - e^{-kt} rho11(0).
  const double kappa = 1.3;
  const DecayModel model(1, kappa);
  const StateVector plus = normalize(make_state(
      1, {{"0", Complex{1.0, 0.0}}, {"1", Complex{0.6, 0.8}}}));
  const DensityMatrix rho0 = DensityMatrix::from_pure(plus);
  const double t = 1.7;
  const DensityMatrix rho = master_rk4(rho0, model, t, 1e-3 / kappa);

  const Complex r11 = rho0.at(1, 1) * std::exp(-kappa * t);
  const Complex r01 = rho0.at(0, 1) * std::exp(-0.5 * kappa * t);
  EXPECT_NEAR(std::abs(rho.at(1, 1) - r11), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(rho.at(0, 1) - r01), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(rho.at(0, 0) - (Complex{1.0, 0.0} - r11)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(rho.trace() - Complex{1.0, 0.0}), 0.0, 1e-10);
}

TEST(MasterEquation, TwoQubitCoherenceDecay) {
  // For (|01>+|10>)/sqrt(2) with equal rates, the 01-10 coherence decays
  // as e^{-kappa t}.
  const double kappa = 1.0;
  const DecayModel model(2, kappa);
  const StateVector bell = normalize(
      make_state(2, {{"01", Complex{1.0, 0.0}}, {"10", Complex{1.0, 0.0}}}));
  const double t = 0.9;
  const DensityMatrix rho =
      master_rk4(DensityMatrix::from_pure(bell), model, t, 1e-3);
  EXPECT_NEAR(rho.at(0b01, 0b10).real(), 0.5 * std::exp(-kappa * t), 1e-9);
  EXPECT_NEAR(rho.at(0b01, 0b01).real(), 0.5 * std::exp(-kappa * t), 1e-9);
  EXPECT_NEAR(rho.at(0b00, 0b00).real(), 1.0 - std::exp(-kappa * t), 1e-9);
}

TEST(MasterEquation, AgreesWithEulerReferenceOnRandomState) {
  const int n = 2;
  const std::vector<double> rates{0.8, 1.4};
  const DecayModel model(rates);
  const StateVector psi = oracle::random_state(n, 4242);
  const DensityMatrix rho0 = DensityMatrix::from_pure(psi);
  const double t = 0.6;
  const DensityMatrix rk = master_rk4(rho0, model, t, 5e-3);
  const Eigen::MatrixXcd euler =
      oracle::evolve_euler(to_eigen(rho0), rates, t, n, 2e-5);
  EXPECT_LT((to_eigen(rk) - euler).cwiseAbs().maxCoeff(), 1e-4);
  // The evolved state stays physical.
  EXPECT_NEAR(std::abs(rk.trace() - Complex{1.0, 0.0}), 0.0, 1e-10);
  EXPECT_LT(rk.hermiticity_deviation(), 1e-12);
  EXPECT_GT(oracle::min_eigenvalue(to_eigen(rk)), -1e-10);
}

TEST(MasterEquation, FourthOrderConvergence) {
  const DecayModel model(1, 1.0);
  const StateVector plus = normalize(
      make_state(1, {{"0", Complex{1.0, 0.0}}, {"1", Complex{1.0, 0.0}}}));
  const DensityMatrix rho0 = DensityMatrix::from_pure(plus);
  const double t = 1.0;
  const Complex exact = rho0.at(1, 1) * std::exp(-t);
  const double e1 =
      std::abs(master_rk4(rho0, model, t, 0.04).at(1, 1) - exact);
  const double e2 =
      std::abs(master_rk4(rho0, model, t, 0.02).at(1, 1) - exact);
  // Halving the step should cut the error by about 2^4.
  EXPECT_GT(e1 / e2, 10.0);
  EXPECT_LT(e1 / e2, 26.0);
}

TEST(MasterEquation, StepGuardAndValidation) {
  const DecayModel model(1, 2.0);
  const DensityMatrix rho(1);
  EXPECT_THROW(master_rk4(rho, model, 1.0, 0.2), StepTooLarge);
  EXPECT_THROW(master_rk4(rho, model, -1.0, 0.01), InvalidDuration);
  EXPECT_THROW(master_rk4(rho, model, 1.0, 0.0), InvalidParameters);
  EXPECT_THROW(master_rk4(DensityMatrix(2), model, 1.0, 0.01),
               DimensionMismatch);
}

TEST(MasterEquation, GroundStateStationary) {
  const DecayModel model(2, 1.0);
  const DensityMatrix rho0 =
      DensityMatrix::from_pure(make_state(2, {{"00", Complex{1.0, 0.0}}}));
  const DensityMatrix rho = master_rk4(rho0, model, 2.0, 0.01);
  for (std::uint64_t r = 0; r < rho.dim(); ++r)
    for (std::uint64_t c = 0; c < rho.dim(); ++c)
      EXPECT_NEAR(std::abs(rho.at(r, c) - rho0.at(r, c)), 0.0, 1e-14);
}
