#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "padic_dbn/exact_inference.hpp"
#include "padic_dbn/oracles/reference.hpp"

using namespace padic_dbn;

TEST(ExactInference, ZeroModelPartitionFunction) {
  const DbnModel m = DbnModel::zeros(TreeGroup(2, 1), ModelKind::conv);
  EXPECT_NEAR(partition_function(m).value(), 16.0, 1e-12);
  const DbnModel m3 = DbnModel::zeros(TreeGroup(3, 1), ModelKind::rbm);
  EXPECT_NEAR(partition_function(m3).log_z, 6.0 * std::log(2.0), 1e-12);
  const Distribution joint_marg = marginal(m3);
  for (double x : joint_marg.probs()) EXPECT_NEAR(x, 1.0 / 8.0, 1e-15);
  EXPECT_NEAR(joint_prob(m, FieldConfig(1, 2), FieldConfig(2, 2)), 1.0 / 16.0, 1e-15);
  EXPECT_NEAR(free_energy_factorized(m, FieldConfig(3, 2)), 4.0, 1e-12);
}

TEST(ExactInference, MatchesNaiveOracle) {
  oracles::Rng rng(3);
  for (ModelKind kind : {ModelKind::rbm, ModelKind::conv, ModelKind::radial}) {
    const DbnModel m = oracles::random_model(rng, TreeGroup(2, 2), kind);
    const long double naive = oracles::naive_partition(m);
    EXPECT_NEAR(partition_function(m).value() / static_cast<double>(naive), 1.0, 1e-12);
    const Distribution ref = oracles::naive_visible_marginal(m);
    EXPECT_LT(max_abs_difference(marginal(m), ref), 1e-12);
    EXPECT_LT(max_abs_difference(visible_marginal_factorized(m), ref), 1e-12);
  }
}

TEST(ExactInference, DeepenedMarginalMatchesJointEnumeration) {
  oracles::Rng rng(8);
  const TreeGroup g(2, 2);
  const DbnModel base = oracles::random_model(rng, g, ModelKind::conv);
  const DbnModel deep = base.with_deepening({DeepLayer{oracles::uniform_vector(rng, 4, -1, 1), 0.5, 1, 1},
                                             DeepLayer{oracles::uniform_vector(rng, 4, -1, 1), std::nullopt, 1, 1}});
  EXPECT_LT(max_abs_difference(marginal(deep), visible_marginal_factorized(deep)), 1e-12);
  const Distribution h = marginal(deep, Side::hidden);
  double s = 0;
  for (double x : h.probs()) s += x;
  EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(ExactInference, KlDivergence) {
  const Distribution u = Distribution::uniform(2);
  const Distribution pm = Distribution::point_mass(2, 1);
  EXPECT_NEAR(kl_divergence(pm, u), std::log(4.0), 1e-12);
  EXPECT_EQ(kl_divergence(u, u), 0.0);
  EXPECT_TRUE(std::isinf(kl_divergence(u, pm)));
  EXPECT_TRUE(kl_support_violated(u, pm));
  EXPECT_NEAR(entropy(u), std::log(4.0), 1e-12);
}

TEST(ExactInference, LogSumExpIsStable) {
  LogSumExp acc;
  for (double x : {1000.0, 1000.0, -1e300}) acc.add(x);
  EXPECT_NEAR(acc.value(), 1000.0 + std::log(2.0), 1e-12);
  const std::vector<double> xs{-800.0, -800.0};
  EXPECT_NEAR(log_sum_exp(xs), -800.0 + std::log(2.0), 1e-12);
  EXPECT_NEAR(log1p_exp(-800.0), 0.0, 1e-300);
  EXPECT_NEAR(log1p_exp(800.0), 800.0, 1e-12);
}

TEST(ExactInference, Deterministic) {
  oracles::Rng rng(21);
  const DbnModel m = oracles::random_model(rng, TreeGroup(3, 1), ModelKind::radial);
  EXPECT_EQ(marginal(m).probs(), marginal(m).probs());
  EXPECT_EQ(partition_function(m).log_z, partition_function(m).log_z);
}

TEST(ExactInference, CapsAreEnforced) {
  const DbnModel m = DbnModel::zeros(TreeGroup(2, 4), ModelKind::conv);
  EXPECT_THROW(partition_function(m), CapExceeded);
  EXPECT_NO_THROW(visible_marginal_factorized(m));
  EnumerationLimits tight{4, 6};
  EXPECT_THROW(visible_marginal_factorized(DbnModel::zeros(TreeGroup(2, 3), ModelKind::conv), tight), CapExceeded);
}

TEST(ExactInference, DistributionValidation) {
  EXPECT_THROW(Distribution(1, {0.5, 0.6}), DomainError);
  EXPECT_THROW(Distribution(1, {1.5, -0.5}), DomainError);
  EXPECT_THROW(Distribution(2, {0.5, 0.5}), DomainError);
}
