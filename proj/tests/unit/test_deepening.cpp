#include <gtest/gtest.h>

#include "padic_dbn/deepening.hpp"
#include "padic_dbn/oracles/reference.hpp"

using namespace padic_dbn;

namespace {

std::vector<Rational> dyadics(oracles::Rng& rng, std::size_t n) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(exact_rational(oracles::dyadic(rng, 2.0)));
  return out;
}

ExactDbnModel random_exact_conv(oracles::Rng& rng, const TreeGroup& g) {
  return ExactDbnModel(g, ConvCoupling<Rational>{dyadics(rng, g.size())}, dyadics(rng, g.size()),
                       dyadics(rng, g.size()));
}

// Every free configuration of the lattice against the collapsed compressed model.
unsigned collapse_mismatches(const LatticeModel<Rational>& lm) {
  const ExactDbnModel c = collapse(lm);
  const auto n0 = static_cast<unsigned>(lm.visible_units());
  const auto free = static_cast<unsigned>(lm.free_hidden().size());
  const auto layers = static_cast<unsigned>(lm.extras.size());
  unsigned misses = 0;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n0); ++v) {
    for (std::uint64_t h = 0; h < (std::uint64_t{1} << free); ++h) {
      const FieldConfig hb(h & ((std::uint64_t{1} << n0) - 1), n0);
      // Silent extras are clamped off and are absent from the free bits.
      std::uint64_t extra = 0;
      std::uint64_t next = n0;
      for (unsigned i = 0; i < layers; ++i) {
        if (!lm.extras[i].silent && ((h >> next++) & 1u)) extra |= std::uint64_t{1} << i;
      }
      const auto e = deep_energy(c, FieldConfig(v, n0), hb, FieldConfig(extra, layers));
      if (!e || *e != lattice_energy(lm, FieldConfig(v, n0), FieldConfig(h, free))) ++misses;
    }
  }
  return misses;
}

}  // namespace

TEST(Deepening, KeyConstructionIndexMap) {
  const ExactDbnModel base = ExactDbnModel::zeros(TreeGroup(2, 1), ModelKind::conv);
  const auto ext = key_construct_full(base, std::vector<Rational>{Rational(1), Rational(2)}, std::optional<Rational>{Rational(0)});
  EXPECT_EQ(ext.j0, GroupElement{2});
  EXPECT_EQ(ext.copy_indices, (std::vector<GroupElement>{GroupElement{2}, GroupElement{3}}));
  EXPECT_EQ(ext.new_parameter_count(), 3u);
  EXPECT_EQ(ext.extended.model.group().level(), 2u);
  EXPECT_EQ(ext.forced_zero_hidden(), (std::vector<std::uint64_t>{3}));
  const auto k = std::get<ConvCoupling<Rational>>(ext.extended.model.coupling()).kernel;
  EXPECT_EQ(k[2], Rational(1));
  EXPECT_EQ(k[3], Rational(2));
}

TEST(Deepening, KeyConstructionRejectsBadInput) {
  const DbnModel base = DbnModel::zeros(TreeGroup(3, 1), ModelKind::conv);
  EXPECT_THROW(key_construct_full(base, std::vector<double>(2, 0.0), std::optional<double>{0.0}), DomainError);
  EXPECT_THROW(key_construct_full(base, std::vector<double>(3, 0.0), std::optional<double>{0.0}, 3, 1), DomainError);
  EXPECT_THROW(key_construct_full(DbnModel::zeros(TreeGroup(3, 1), ModelKind::rbm), std::vector<double>(3, 0.0), std::optional<double>{}),
               DomainError);
}

TEST(Deepening, CosetBlocksPartitionTheBilinearForm) {
  oracles::Rng rng(4);
  for (unsigned p : {2u, 3u}) {
    const TreeGroup g(p, 1);
    const auto ext = key_construct_full(random_exact_conv(rng, g), dyadics(rng, p), std::optional<Rational>{Rational(1)},
                                        p - 1, 1);
    const auto n = static_cast<unsigned>(g.size());
    for (std::uint64_t v = 0; v < (1u << n); ++v)
      for (std::uint64_t h = 0; h < (1u << (n + 1)); ++h) {
        Rational s{0};
        for (unsigned a = 0; a < p; ++a)
          for (unsigned b = 0; b < p; ++b) s += coset_block_sum(ext, a, b, FieldConfig(v, n), FieldConfig(h, n + 1));
        EXPECT_EQ(s, lattice_bilinear_form(ext, FieldConfig(v, n), FieldConfig(h, n + 1)));
      }
  }
}

TEST(Deepening, CollapseIsExact) {
  oracles::Rng rng(9);
  for (unsigned p : {2u, 3u}) {
    const TreeGroup g(p, 1);
    for (int d = 0; d < 5; ++d) {
      const auto ext = key_construct_full(random_exact_conv(rng, g), dyadics(rng, p),
                                          std::optional<Rational>{exact_rational(oracles::dyadic(rng, 2.0))});
      EXPECT_EQ(collapse_mismatches(ext.extended), 0u);
    }
  }
}

TEST(Deepening, CollapseIsExactAcrossTwoSteps) {
  oracles::Rng rng(10);
  const TreeGroup g(2, 1);
  const auto first = key_construct_full(random_exact_conv(rng, g), dyadics(rng, 2), std::optional<Rational>{Rational(1)});
  const auto second = key_construct_full(first.extended, dyadics(rng, 4), std::optional<Rational>{Rational(-1, 2)});
  EXPECT_EQ(second.extended.model.group().level(), 3u);
  EXPECT_EQ(second.extended.extras.size(), 2u);
  EXPECT_EQ(collapse_mismatches(second.extended), 0u);
  const auto silent = key_construct_full(first.extended, dyadics(rng, 4), std::optional<Rational>{});
  EXPECT_EQ(collapse_mismatches(silent.extended), 0u);
}

TEST(Deepening, LatticeMarginalMatchesCompressedMarginal) {
  oracles::Rng rng(12);
  const TreeGroup g(2, 2);
  const DbnModel base = oracles::random_model(rng, g, ModelKind::conv, 0.5);
  const auto ext = key_construct_full(base, oracles::uniform_vector(rng, 4, -1, 1), std::optional<double>{0.3});
  const DbnModel c = collapse(ext.extended);
  EXPECT_LT(max_abs_difference(lattice_marginal(ext.extended), extended_marginal(c.base(), c.deepening())), 1e-12);
  EXPECT_LT(max_abs_difference(lattice_marginal(ext.extended), visible_marginal_factorized(c)), 1e-12);
}

TEST(Deepening, SilentLayerLeavesMarginalUnchanged) {
  oracles::Rng rng(13);
  const DbnModel base = oracles::random_model(rng, TreeGroup(2, 2), ModelKind::conv);
  const Distribution ref = marginal(base);
  EXPECT_LT(max_abs_difference(extended_marginal(base, {}), ref), 1e-15);
  EXPECT_LT(max_abs_difference(extended_marginal(base, {DeepLayer{{0, 0, 0, 0}, std::nullopt, 1, 1}}), ref), 1e-15);
  const std::vector<double> w{1, -1, 2, 0};
  EXPECT_LT(max_abs_difference(extended_marginal(base, {DeepLayer{w, -40.0, 1, 1}}), ref), 1e-12);
}

TEST(Deepening, NominalLayerScalesFoldedWeights) {
  const DbnModel base = DbnModel::zeros(TreeGroup(2, 1), ModelKind::conv);
  const auto ext = key_construct_full(base, std::vector<double>{1.5, -2.0}, std::optional<double>{0.25});
  const DeepLayer layer = nominal_layer(ext);
  EXPECT_EQ(layer.w_eff, (std::vector<double>{3.0, -4.0}));
  EXPECT_EQ(*layer.b_eff, 0.25);
}
