#include <gtest/gtest.h>

#include <cmath>

#include "catassoc/association.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace catassoc;

namespace {

ContingencyTable table_of(const fixtures::Matrix& m) { return ContingencyTable::from_rows(m); }

}  // namespace

// Printed values carry four decimals, so 5e-5 is the rounding bound.
class LoanTables : public ::testing::TestWithParam<fixtures::LoanCase> {};

TEST_P(LoanTables, MatchPrintedSummaries) {
  const auto& c = GetParam();
  const auto t = table_of(c.counts);
  EXPECT_NEAR(gk_tau(t), c.tau, 5e-5);
  EXPECT_NEAR(tau(t, WeightScheme::gk), c.tau, 5e-5);
  const auto theta = theta_vector(t);
  for (std::size_t s = 0; s < c.theta.size(); ++s) EXPECT_NEAR(theta[s], c.theta[s], 5e-5) << "theta " << s;
  const auto g = gamma_matrix(t);
  for (std::size_t s = 0; s < c.gamma.size(); ++s)
    for (std::size_t u = 0; u < c.gamma[s].size(); ++u) EXPECT_NEAR(g(s, u), c.gamma[s][u], 5e-5) << s << "," << u;
  // Independent oracles agree to rounding error.
  const auto ref = oracle::confusion_by_conditioning(c.counts);
  for (std::size_t s = 0; s < g.size; ++s)
    for (std::size_t u = 0; u < g.size; ++u) EXPECT_NEAR(g(s, u), ref[s][u], 1e-12);
  EXPECT_NEAR(gk_tau(t), oracle::gk_tau_by_error_reduction(c.counts), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Printed, LoanTables, ::testing::ValuesIn(fixtures::loan_cases()),
                         [](const auto& info) { return info.param.response + "_given_" + info.param.given; });

TEST(Gamma, DetailedBalance) {
  for (const auto& c : fixtures::loan_cases()) {
    const auto g = gamma_matrix(table_of(c.counts));
    for (std::size_t s = 0; s < g.size; ++s)
      for (std::size_t t = 0; t < g.size; ++t)
        EXPECT_NEAR(g.y_marginal[s] * g(s, t), g.y_marginal[t] * g(t, s), 1e-15);
  }
}

TEST(Gamma, ErrorRateAccessors) {
  const auto g = gamma_matrix(table_of(fixtures::kOnTimeRisk));
  EXPECT_NEAR(g.accuracy(0), .5108, 5e-5);
  EXPECT_NEAR(g.accuracy(1), .0402, 5e-5);
  EXPECT_NEAR(g.accuracy(2), .4976, 5e-5);
  const auto row = g.row_errors(0);
  EXPECT_EQ(row[0], 0.0);
  EXPECT_NEAR(row[1] + row[2], 1.0 - g.accuracy(0), 1e-15);
  const auto col = g.column_errors(2);
  EXPECT_EQ(col[2], 0.0);
  EXPECT_DOUBLE_EQ(col[0], g(0, 2));
}

TEST(Gamma, DeterminedAndIndependentExtremes) {
  const auto det = table_of({{3, 0}, {0, 5}, {2, 0}});
  EXPECT_TRUE(determines(det));
  const auto gd = gamma_matrix(det);
  EXPECT_DOUBLE_EQ(gd(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(gd(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(gd(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(tau(det, WeightScheme::equal), 1.0);

  const auto ind = table_of({{1, 3}, {2, 6}});
  EXPECT_FALSE(determines(ind));
  const auto gi = gamma_matrix(ind);
  for (std::size_t s = 0; s < 2; ++s) {
    EXPECT_NEAR(gi(s, 0), 0.25, 1e-15);
    EXPECT_NEAR(gi(s, 1), 0.75, 1e-15);
  }
  EXPECT_NEAR(gk_tau(ind), 0.0, 1e-15);
}

TEST(Gamma, ZeroMassResponseLevelsAreDropped) {
  const auto t = table_of({{2, 0, 1}, {1, 0, 4}});
  const auto g = gamma_matrix(t);
  EXPECT_EQ(g.size, 2u);
  EXPECT_EQ(g.levels, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(g.dropped, (std::vector<std::size_t>{1}));
  const auto theta = theta_vector(t);
  EXPECT_EQ(theta.size(), 3u);
  EXPECT_FALSE(theta.defined[1]);
  EXPECT_TRUE(theta.defined[0]);
  // Weight on the undefined component is dropped and the rest renormalized.
  const double eq = tau_alpha(theta, weights_equal(3));
  EXPECT_NEAR(eq, 0.5 * (theta[0] + theta[2]), 1e-15);
  EXPECT_THROW(weights_invprob(MarginalStats::of(t)), DataError);
}

TEST(Theta, EqualTauUnequalVectorsExactFractions) {
  const auto d = fixtures::equal_tau_unequal_vectors();
  const auto t1 = theta_vector(contingency(d, VarSet{1}, 0));
  const auto t2 = theta_vector(contingency(d, VarSet{2}, 0));
  const double a = 1.0 / 6, b = 17.0 / 72, c = 23.0 / 48;
  EXPECT_NEAR(t1[0], a, 1e-12);
  EXPECT_NEAR(t1[1], b, 1e-12);
  EXPECT_NEAR(t1[2], c, 1e-12);
  EXPECT_NEAR(t2[0], b, 1e-12);
  EXPECT_NEAR(t2[1], a, 1e-12);
  EXPECT_NEAR(t2[2], c, 1e-12);

  // p(Y) = (.4, .4, .2); hand-derived tau values.
  const auto t = contingency(d, VarSet{1}, 0);
  EXPECT_NEAR(gk_tau(t), 13.0 / 48, 1e-12);
  EXPECT_NEAR(tau(t, WeightScheme::equal), 63.5 / 216, 1e-12);
  EXPECT_NEAR(tau(t, WeightScheme::invprob), 98.0 / 288, 1e-12);
}

TEST(Weights, Schemes) {
  const auto stats = MarginalStats::from_masses(std::vector<double>{2, 1, 1});
  EXPECT_NEAR(stats.gini_variation, 1.0 - (0.25 + 0.0625 + 0.0625), 1e-15);
  const auto gk = weights_gk(stats);
  EXPECT_NEAR(gk[0], 0.25 / (0.25 + 2 * 0.1875), 1e-15);
  EXPECT_NEAR(gk[1], gk[2], 1e-15);
  const auto ip = weights_invprob(stats);
  EXPECT_NEAR(ip[0], 0.2, 1e-15);
  EXPECT_NEAR(ip[1], 0.4, 1e-15);
  const auto eq = weights_equal(4);
  EXPECT_DOUBLE_EQ(eq[3], 0.25);
  EXPECT_TRUE(gk.regular());
  EXPECT_THROW(weights_gk(MarginalStats::from_masses(std::vector<double>{3, 0})), DataError);
}

TEST(Weights, Validation) {
  EXPECT_THROW(WeightVector(std::vector<double>{0.5, 0.4}), std::invalid_argument);
  EXPECT_THROW(WeightVector(std::vector<double>{1.5, -0.5}), std::invalid_argument);
  EXPECT_THROW(WeightVector::normalized({0.0, 0.0}), std::invalid_argument);
  const auto w = WeightVector::normalized({2.0, 0.0, 2.0});
  EXPECT_DOUBLE_EQ(w[0], 0.5);
  EXPECT_FALSE(w.regular());
  const auto theta = theta_vector(table_of({{1, 2}, {3, 1}}));
  EXPECT_THROW(tau_alpha(theta, weights_equal(3)), std::invalid_argument);
  const WeightSpec fixed = WeightVector::normalized({1.0, 1.0, 1.0});
  EXPECT_THROW(resolve_weights(fixed, MarginalStats::from_masses(std::vector<double>{1, 1})), std::invalid_argument);
}

TEST(Tau, PointMassResponseIsUndefined) {
  const auto t = table_of({{3}, {2}});
  EXPECT_THROW(gk_tau(t), DataError);
  EXPECT_THROW(tau(t, WeightScheme::equal), DataError);
}

TEST(Concentration, ExpectedConcentrationAndDeterminism) {
  const auto d = fixtures::equal_tau_unequal_vectors();
  // X1 masses .6, .1, .1, .2.
  EXPECT_NEAR(expected_concentration(d, VarSet{1}), 0.42, 1e-15);
  EXPECT_GE(expected_concentration(d, VarSet{1}), expected_concentration(d, VarSet{1, 2}));
  EXPECT_FALSE(determines(contingency(d, VarSet{1}, 0)));
}
