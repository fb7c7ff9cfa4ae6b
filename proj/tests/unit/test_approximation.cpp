#include <gtest/gtest.h>

#include <cmath>

#include "padic_dbn/approximation.hpp"
#include "padic_dbn/oracles/reference.hpp"

using namespace padic_dbn;

TEST(Approximation, IndicatorWeights) {
  EXPECT_EQ(indicator_weights(FieldConfig(0b0101, 4), 2.0), (std::vector<double>{1, -1, 1, -1}));
}

TEST(Approximation, SelectionPicksLargestShortfall) {
  const Distribution q = Distribution::uniform(2);
  const Distribution p(2, {0.3, 0.3, 0.3, 0.1});
  const Lemma3Choice c = lemma3_select(q, p, 1.0);
  EXPECT_EQ(c.v_hat.bits(), 3u);
  EXPECT_THROW(lemma3_select(q, q, 1.0), AlreadyMatched);
}

TEST(Approximation, ConstructiveStepRefusesMatchedTarget) {
  const DbnModel m = DbnModel::zeros(TreeGroup(2, 1), ModelKind::conv);
  EXPECT_THROW(theorem2_step(m, Distribution::uniform(2)), AlreadyMatched);
}

TEST(Approximation, ConstructiveStepDecreasesKl) {
  oracles::Rng rng(17);
  const TreeGroup g(2, 2);
  for (int t = 0; t < 10; ++t) {
    const DbnModel m = oracles::random_model(rng, g, ModelKind::conv);
    const Distribution q = oracles::random_distribution(rng, 4);
    const Theorem2Step s = theorem2_step(m, q);
    EXPECT_TRUE(s.improved);
    EXPECT_LT(s.kl_after, s.kl_before);
    EXPECT_LT(inequality1_sum(indicator_weights(s.target, s.alpha0), visible_marginal_factorized(m), q), 0.0);
    EXPECT_NEAR(kl_divergence(q, extended_marginal(m, {s.layer})), s.kl_after, 1e-12);
  }
}

TEST(Approximation, GreedyStopsImmediatelyWhenEpsIsLoose) {
  oracles::Rng rng(2);
  const DbnModel m = DbnModel::zeros(TreeGroup(2, 2), ModelKind::conv);
  const Distribution q = oracles::random_distribution(rng, 4);
  const ApproxTrace t = greedy_construct(q, m, 100.0, 5);
  EXPECT_TRUE(t.steps.empty());
  EXPECT_TRUE(t.reached);
}

TEST(Approximation, GreedyIsMonotone) {
  oracles::Rng rng(3);
  const DbnModel m = DbnModel::zeros(TreeGroup(2, 2), ModelKind::conv);
  const Distribution q = oracles::random_distribution(rng, 4);
  const ApproxTrace t = greedy_construct(q, m, 1e-9, 6);
  double prev = t.initial_kl;
  for (const auto& s : t.steps) {
    EXPECT_LT(s.kl, prev);
    prev = s.kl;
  }
  EXPECT_EQ(t.final_model.deepening().size(), t.steps.size());
}

TEST(Approximation, LambdaForMultiplier) {
  EXPECT_NEAR(lambda_for_multiplier(3.0), std::log(2.0), 1e-15);
  EXPECT_EQ(lambda_for_multiplier(1.0), -std::numeric_limits<double>::infinity());
  EXPECT_THROW(lambda_for_multiplier(0.5), DomainError);
}

TEST(Approximation, RecursiveConstructionPointMass) {
  const double lambda = 3.0;
  const double e = std::exp(lambda);
  const Distribution q = Distribution::point_mass(2, 2);
  const Distribution closed = theorem3_closed_form(q, lambda);
  EXPECT_NEAR(closed[2], (1 + e) / (4 + e), 1e-15);
  EXPECT_NEAR(closed[0], 1 / (4 + e), 1e-15);
  const Theorem3Result r = theorem3_construct(q, 2, lambda, 80.0);
  EXPECT_LT(max_abs_difference(visible_marginal_factorized(r.model), closed), 1e-12);
}

TEST(Approximation, RecursiveConstructionUniformTarget) {
  const Distribution q = Distribution::uniform(2);
  const Theorem3Result r = theorem3_construct(q, 2, 5.0);
  EXPECT_TRUE(r.model.deepening().empty());
  EXPECT_LT(max_abs_difference(visible_marginal_factorized(r.model), q), 1e-15);
}

TEST(Approximation, RecursiveConstructionSparseTarget) {
  oracles::Rng rng(5);
  const Distribution q = oracles::random_sparse_distribution(rng, 4, 3);
  const Theorem3Result r = theorem3_construct(q, 2, 14.0, 80.0);
  const Distribution closed = theorem3_closed_form(q, 14.0);
  EXPECT_LT(max_abs_difference(visible_marginal_factorized(r.model), closed), 1e-6);
  EXPECT_LT(r.trace.final_kl, 1e-3);
  EXPECT_NEAR(r.trace.final_kl, theorem3_kl_closed_form(q, 14.0), 1e-9);
  EXPECT_LE(theorem3_kl_closed_form(q, 14.0), theorem3_kl_estimate(q, 14.0));
}

TEST(Approximation, Padding) {
  EXPECT_EQ(padded_level(3, 2), 2u);
  EXPECT_EQ(padded_level(4, 3), 2u);
  const Distribution q = pad_distribution(Distribution::point_mass(3, 5), 2);
  EXPECT_EQ(q.width(), 4u);
  EXPECT_EQ(q[5], 1.0);
  EXPECT_THROW(padded_level(3, 4), DomainError);
}
