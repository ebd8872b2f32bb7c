#include "oil/deformation.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace oil;

TEST(Lambda, PaperFormulaAgainstLongDouble) {
  for (double eps : {0.2, 0.4, 1.0, 1.5}) {
    const auto l = lambda_sequence(eps, LambdaFamily::paper_formula, 2000);
    EXPECT_EQ(l[0], 1.0);
    // long double keeps ~1e-19 absolute, enough while lambda_k > 1e-6
    for (std::size_t k = 1; k < l.size() && l[k] > 1e-6; ++k)
      ASSERT_NEAR(l[k] / oracle::lambda_paper(eps, k), 1.0, 1e-12) << "eps=" << eps << " k=" << k;
  }
}

TEST(Lambda, TaylorTailAtLargeK) {
  // lambda_k = k^{-2eps}/2 (1 + o(1)); the binomial series converges for t > 1
  for (double eps : {0.3, 0.5, 0.8}) {
    const auto l = lambda_sequence(eps, LambdaFamily::paper_formula, 1 << 16);
    for (std::size_t k : {1000u, 30000u, 65535u}) {
      const double t = std::pow(static_cast<double>(k), eps);
      EXPECT_NEAR(l[k] / oracle::chop_series(t), 1.0, 1e-13);
      EXPECT_NEAR(l[k] / (0.5 * std::pow(k, -2 * eps)), 1.0, 2.0 / (t * t));
    }
  }
}

TEST(Lambda, PurePowerAndFamilies) {
  const auto l = lambda_sequence(0.3, LambdaFamily::pure_power, 100);
  for (std::size_t k = 0; k < 100; ++k) EXPECT_NEAR(l[k], oracle::lambda_power(0.3, k), 1e-15);
  EXPECT_EQ(parse_family("paper"), LambdaFamily::paper_formula);
  EXPECT_EQ(parse_family("pure_power"), LambdaFamily::pure_power);
  EXPECT_STREQ(to_string(LambdaFamily::pure_power), "pure_power");
  EXPECT_THROW(parse_family("cubic"), std::invalid_argument);
  EXPECT_THROW(lambda_sequence(0.0, LambdaFamily::pure_power, 3), std::invalid_argument);
  EXPECT_THROW(lambda_sequence(-1.0, LambdaFamily::paper_formula, 3), std::invalid_argument);
}

TEST(Lambda, StableWhereNaiveCancels) {
  // the naive 1 - t/sqrt(1+t^2) is 0 in double for t >= ~1e8
  EXPECT_EQ(1.0 - 1e9 / std::sqrt(1.0 + 1e18), 0.0);
  EXPECT_NEAR(chopping_gap(1e9) / 5e-19, 1.0, 1e-12);
  EXPECT_NEAR(chopping_gap(0.0), 1.0, 0.0);
}

TEST(Chopping, BoundApproachesHalfFromBelow) {
  double prev = 0.0;
  for (std::size_t k = 1; k < 5000; k = k * 3 / 2 + 1) {
    const double b = chopping_asymptotic_bound(k, 1);
    EXPECT_GE(b, prev);
    EXPECT_LT(b, 0.5);
    prev = b;
  }
  EXPECT_NEAR(chopping_asymptotic_bound(1, 1), 1.0 - 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(chopping_asymptotic_bound(100000, 4), 0.5, 1e-9);
  EXPECT_THROW(chopping_asymptotic_bound(0, 3), std::invalid_argument);
}

TEST(Deformation, OperatorIndexesByMode) {
  const auto l = lambda_sequence(0.5, LambdaFamily::pure_power, 20);
  const WindowedOperator t = deformation_operator(l, Window{5, 12});
  EXPECT_EQ(t.at_modes(5, 5), cplx(l[5]));
  EXPECT_EQ(t.at_modes(12, 12), cplx(l[12]));
  EXPECT_THROW(deformation_operator(l, Window{5, 20}), std::invalid_argument);
  EXPECT_THROW(deformation_operator(l, Window{-1, 3}), std::invalid_argument);
  const auto s = signed_deformation_from_order(0.5, Window{0, 9});
  const auto pl = lambda_sequence(0.5, LambdaFamily::paper_formula, 10);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(s.at_modes(k, k), cplx(-pl[k]));
}

TEST(Deformation, ShiftCoefficients) {
  for (double eps : {0.3, 0.6})
    for (auto fam : {LambdaFamily::paper_formula, LambdaFamily::pure_power}) {
      const auto l = lambda_sequence(eps, fam, 64);
      EXPECT_LE(shift_compression_residual(l, 60), 1e-12);
    }
  const auto l = lambda_sequence(0.3, LambdaFamily::pure_power, 20);
  EXPECT_THROW(shift_compression_residual(l, 17), std::invalid_argument);
  EXPECT_THROW(shift_compression_residual(l, 0), std::invalid_argument);
}

TEST(Deformation, CompressionEntrywise) {
  // (P+T) z (P+T) at (k+1, k) computed by hand
  const auto l = lambda_sequence(0.4, LambdaFamily::paper_formula, 30);
  const Window w{-6, 24};
  const WindowedOperator t = deformation_operator(l, Window{0, 24});
  const WindowedOperator c = deformed_compression(t, Symbol::monomial(1), w);
  for (int k = 0; k < 20; ++k)
    EXPECT_NEAR(std::abs(c.at_modes(k + 1, k) - (1 + l[k + 1]) * (1 + l[k])), 0.0, 1e-15);
  EXPECT_EQ(c.at_modes(0, -1), cplx{});
  EXPECT_EQ(c.at_modes(3, 3), cplx{});
}

TEST(Deformation, RejectsNonDiagonalOrMisplacedT) {
  const Window w{-8, 20};
  WindowedOperator t = identity_operator(Window{0, 10});
  t.entries(0, 1) = 0.5;
  EXPECT_THROW(deformed_compression(t, Symbol::monomial(1), w), std::invalid_argument);
  EXPECT_THROW(deformed_compression(identity_operator(Window{0, 30}), Symbol::monomial(1), w),
               std::invalid_argument);
}

TEST(Deformation, QuadraticIdentity) {
  for (double eps : {0.3, 0.6, 1.5}) EXPECT_LE(quadratic_identity_residual(eps, Window{0, 1023}), 1e-12);
}

TEST(Deformation, FourTermExpansion) {
  const auto l = lambda_sequence(0.4, LambdaFamily::paper_formula, 81);
  const WindowedOperator t = deformation_operator(l, Window{0, 80});
  const Window w{-16, 80};
  const Symbol z = Symbol::monomial(1), zb = Symbol::monomial(-1);
  for (const Symbol& a : {z, z + zb, Symbol::monomial(2)})
    for (const Symbol& b : {z, z + zb, Symbol::monomial(2)}) EXPECT_LE(deformation_defect_residuals(t, a, b, w), 1e-12);
  // with T = 0 the defect is the usual Toeplitz defect
  const WindowedOperator zero = diagonal_operator(Window{0, 80}, std::vector<cplx>(81));
  const Matrix d0 = deformation_defect(zero, z, zb, w).entries;
  const Matrix ref = toeplitz_compress(Symbol::constant(1.0), w).entries -
                     toeplitz_compress(z, w).entries * toeplitz_compress(zb, w).entries;
  EXPECT_LE((d0 - ref).norm(), 1e-14);
}

TEST(Haar, UnitaryAndDeterministic) {
  const auto u = haar_unitary(40, 12).entries;
  EXPECT_LE((u.adjoint() * u - Matrix::Identity(40, 40)).norm(), 1e-12);
  EXPECT_EQ((u - haar_unitary(40, 12).entries).norm(), 0.0);
  EXPECT_THROW(haar_unitary(0, 1), std::invalid_argument);
}

TEST(Haar, FirstMomentOfEntries) {
  // E|U_11|^2 = 1/n
  double acc = 0.0;
  const int n = 8, reps = 2000;
  for (int s = 0; s < reps; ++s) acc += std::norm(haar_unitary(n, 1000 + s).entries(0, 0));
  EXPECT_NEAR(acc / reps, 1.0 / n, 0.01);
}

TEST(Lemma, ParamsValidation) {
  DeformationParams p;
  EXPECT_NO_THROW(validate(p));
  p.ambient = p.modes + 1;
  EXPECT_THROW(validate(p), std::invalid_argument);
  p = {};
  p.p = 0.5;
  EXPECT_THROW(validate(p), std::invalid_argument);
  p = {};
  p.epsilon = 0.0;
  EXPECT_THROW(validate(p), std::invalid_argument);
}

TEST(Lemma, IdentityUnitaryGivesExactDiagonalGap) {
  // with U = 1, L = S - (1+T)S(1+T) and ||L e_k||^2 = (c_k - 1)^2 exactly
  const auto l = lambda_sequence(0.4, LambdaFamily::paper_formula, 20);
  const LemmaTrial t = lemma_trial(l, Matrix::Identity(16, 16), 20, 2.0);
  for (int k = 0; k < 16; ++k) {
    const double c = (1 + l[k]) * (1 + l[k + 1]);
    EXPECT_NEAR(t.gaps[k], (c - 1) * (c - 1) - l[k] * l[k], 1e-14);
  }
  EXPECT_GE(t.min_gap, 0.0);
  EXPECT_LE(t.expansion_residual, 1e-13);
}

TEST(Lemma, SmallReportHolds) {
  DeformationParams p;
  p.modes = 24;
  p.ambient = 26;
  const LemmaReport r = lemma_lower_bound_report(p, 5);
  EXPECT_EQ(r.trials.size(), 5u);
  EXPECT_EQ(r.trials[3].seed, 42u ^ 3u);
  long double rhs = 0;
  for (int k = 0; k < 24; ++k) rhs += (long double)r.lambda[k] * r.lambda[k];
  EXPECT_NEAR(r.rhs_norm, std::sqrt(static_cast<double>(rhs)), 1e-14);
  EXPECT_TRUE(r.holds());
  EXPECT_THROW(lemma_lower_bound_report(p, 0), std::invalid_argument);
}

TEST(Sweep, PairsAndPreconditions) {
  const SweepReport r = epsilon_sweep(2.0, {0.1, 0.3, 0.6, 0.8}, LambdaFamily::pure_power, 1 << 12, false);
  ASSERT_EQ(r.points.size(), 4u);
  ASSERT_EQ(r.pairs.size(), 2u);
  EXPECT_NEAR(r.pairs[0].shifted, 0.6, 1e-12);
  EXPECT_EQ(r.points[1].doubling_indices.back(), 1u << 12);
  EXPECT_EQ(r.points[0].at_p.verdict, Verdict::divergent);
  EXPECT_THROW(epsilon_sweep(2.0, {0.3, 0.2}, LambdaFamily::pure_power, 1 << 12, false), std::invalid_argument);
  EXPECT_THROW(epsilon_sweep(2.0, {0.3, 1.2}, LambdaFamily::pure_power, 1 << 12, false), std::invalid_argument);
  EXPECT_THROW(epsilon_sweep(2.0, {0.3}, LambdaFamily::pure_power, 1000, false), std::invalid_argument);
  EXPECT_THROW(epsilon_sweep(0.5, {0.3}, LambdaFamily::pure_power, 1 << 12, false), std::invalid_argument);
  EXPECT_THROW(epsilon_sweep(2.0, {}, LambdaFamily::pure_power, 1 << 12, false), std::invalid_argument);
}

TEST(Sweep, PartialSumsMatchOracle) {
  const SweepReport r = epsilon_sweep(2.0, {0.5}, LambdaFamily::paper_formula, 1 << 10, true, 7);
  const auto& pt = r.points[0];
  std::vector<double> l(1 << 10);
  for (std::size_t k = 0; k < l.size(); ++k) l[k] = oracle::lambda_paper(0.5, k);
  for (std::size_t i = 0; i < pt.doubling_indices.size(); ++i)
    EXPECT_NEAR(pt.partial_sums[i], static_cast<double>(oracle::power_sum(l, 2.0, pt.doubling_indices[i])), 1e-12);
  ASSERT_TRUE(pt.lemma.has_value());
  EXPECT_EQ(pt.lemma->params.seed, 7u);
  EXPECT_TRUE(pt.lemma->holds());
}

TEST(Deformation, ZeroDeformationIsTheShift) {
  const Window w{-6, 30};
  const WindowedOperator zero = diagonal_operator(Window{0, 30}, std::vector<cplx>(31));
  const WindowedOperator c = deformed_compression(zero, Symbol::monomial(1), w);
  for (int k = 0; k < 27; ++k)
    for (int j = 0; j <= 30; ++j) EXPECT_EQ(c.at_modes(j, k), j == k + 1 ? cplx(1.0) : cplx{});
}
