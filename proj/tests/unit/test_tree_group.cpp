#include <gtest/gtest.h>

#include "padic_dbn/errors.hpp"
#include "padic_dbn/tree_group.hpp"

using namespace padic_dbn;

namespace {
GroupElement E(std::uint64_t v) { return GroupElement{v}; }
}  // namespace

TEST(TreeGroup, AdditionWrapsModPl) {
  const TreeGroup g(2, 3);
  EXPECT_EQ(g.add(E(5), E(7)), E(4));
  EXPECT_EQ(g.add(E(6), E(0)), E(6));
  EXPECT_EQ(TreeGroup(3, 2).add(E(8), E(1)), E(0));
}

TEST(TreeGroup, Negation) {
  EXPECT_EQ(TreeGroup(2, 3).neg(E(3)), E(5));
  EXPECT_EQ(TreeGroup(2, 3).neg(E(0)), E(0));
  EXPECT_EQ(TreeGroup(3, 1).neg(E(1)), E(2));
}

TEST(TreeGroup, ValuationAndNorm) {
  const TreeGroup g(2, 3);
  const Valuation v = g.valuation(E(6));
  EXPECT_EQ(v.order, 1u);
  EXPECT_EQ(v.norm, Rational(1, 2));
  const Valuation z = g.valuation(E(0));
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(z.norm, Rational(0));
  const Valuation t = TreeGroup(3, 2).valuation(E(3));
  EXPECT_EQ(t.order, 1u);
  EXPECT_EQ(t.norm, Rational(1, 3));
}

TEST(TreeGroup, AncestorLevel) {
  const TreeGroup g(2, 3);
  EXPECT_EQ(g.ancestor_level(E(1), E(5)), 2u);
  EXPECT_EQ(g.ancestor_level(E(4), E(4)), 3u);
  EXPECT_EQ(g.ancestor_level(E(0), E(1)), 0u);
}

TEST(TreeGroup, ProjectAndLift) {
  EXPECT_EQ(TreeGroup(2, 4).project(E(13)), E(5));
  EXPECT_EQ(TreeGroup(2, 4).project(E(0)), E(0));
  EXPECT_EQ(TreeGroup(3, 2).project(E(7)), E(1));
  EXPECT_EQ(TreeGroup(2, 2).lift(E(3)), E(3));
  // lift(4) + lift(4) = 8 leaves the image of G_3 in G_4.
  const TreeGroup g3(2, 3);
  const TreeGroup g4 = g3.refined();
  const GroupElement s = g4.add(g3.lift(E(4)), g3.lift(E(4)));
  EXPECT_EQ(s, E(8));
  EXPECT_FALSE(g3.contains(s));
}

TEST(TreeGroup, TorsionAndCosets) {
  const auto t = TreeGroup(3, 1).torsion_and_cosets();
  EXPECT_EQ(t.torsion, (std::vector<GroupElement>{E(0), E(3), E(6)}));
  const auto c = TreeGroup(2, 1).torsion_and_cosets();
  ASSERT_EQ(c.cosets.size(), 2u);
  EXPECT_EQ(c.cosets[0], (std::vector<GroupElement>{E(0), E(1)}));
  EXPECT_EQ(c.cosets[1], (std::vector<GroupElement>{E(2), E(3)}));
  for (const auto& coset : TreeGroup(5, 2).torsion_and_cosets().cosets) EXPECT_EQ(coset.size(), 25u);
}

TEST(TreeGroup, DigitsRoundTrip) {
  const TreeGroup g(3, 3);
  for (std::uint64_t x = 0; x < g.size(); ++x) {
    const auto d = g.digits(E(x));
    EXPECT_EQ(g.from_digits(d), E(x));
  }
  EXPECT_EQ(TreeGroup(2, 3).digits(E(6)), (std::vector<unsigned>{0, 1, 1}));
}

TEST(TreeGroup, UltrametricExhaustiveSmall) {
  const TreeGroup g(2, 4);
  for (std::uint64_t a = 0; a < g.size(); ++a)
    for (std::uint64_t b = 0; b < g.size(); ++b)
      for (std::uint64_t c = 0; c < g.size(); ++c) {
        const Rational dab = g.distance(E(a), E(b));
        EXPECT_LE(dab, std::max(g.distance(E(a), E(c)), g.distance(E(c), E(b))));
      }
}

TEST(TreeGroup, Errors) {
  EXPECT_THROW(TreeGroup(4, 1), DomainError);
  EXPECT_THROW(TreeGroup(2, 0), DomainError);
  EXPECT_THROW(TreeGroup(2, 30), CapExceeded);
  EXPECT_THROW(TreeGroup(2, 2).add(E(4), E(0)), DomainError);
}
