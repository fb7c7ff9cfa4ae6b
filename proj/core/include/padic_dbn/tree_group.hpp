#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "padic_dbn/rational.hpp"

namespace padic_dbn {

inline constexpr std::uint64_t kDefaultGroupCap = std::uint64_t{1} << 20;

// Order of the zero element, which is divisible by every power of p.
inline constexpr unsigned kInfiniteOrder = ~0u;

struct GroupElement {
  std::uint64_t value = 0;
  friend constexpr auto operator<=>(GroupElement, GroupElement) = default;
};

struct Valuation {
  unsigned order = kInfiniteOrder;
  Rational norm;  // p^(-order), or 0 for the zero element

  bool is_zero() const { return order == kInfiniteOrder; }
};

struct CosetDecomposition {
  std::vector<GroupElement> torsion;              // 0 first, then a*p^l for a = 1..p-1
  std::vector<std::vector<GroupElement>> cosets;  // cosets[t] = G_l + torsion[t]
};

bool is_prime(std::uint64_t n);

// G_l = Z/p^l, the leaves of a rooted p-ary tree with l levels below the root.
class TreeGroup {
 public:
  TreeGroup(unsigned p, unsigned level, std::uint64_t cap = kDefaultGroupCap);

  unsigned prime() const { return p_; }
  unsigned level() const { return level_; }
  std::uint64_t size() const { return size_; }
  std::uint64_t cap() const { return cap_; }

  // p^k for k <= level + 1.
  std::uint64_t power(unsigned k) const;

  GroupElement element(std::uint64_t value) const;
  bool contains(GroupElement a) const { return a.value < size_; }

  GroupElement add(GroupElement a, GroupElement b) const;
  GroupElement neg(GroupElement a) const;
  GroupElement sub(GroupElement a, GroupElement b) const;

  Valuation valuation(GroupElement a) const;
  unsigned order(GroupElement a) const;

  // Level of the first common ancestor of two leaves; a == b gives level().
  unsigned ancestor_level(GroupElement a, GroupElement b) const;
  Rational distance(GroupElement a, GroupElement b) const;

  // Base-p digits, least significant first, always level() of them.
  std::vector<unsigned> digits(GroupElement a) const;
  GroupElement from_digits(std::span<const unsigned> digits) const;

  TreeGroup refined() const;
  TreeGroup coarsened() const;

  // This group is G_{l+1}; reduce mod p^l.
  GroupElement project(GroupElement a) const;
  // This group is G_l; the same representative inside G_{l+1}. Not a homomorphism.
  GroupElement lift(GroupElement a) const;

  // T_{l+1} and the cosets G_l + t, as subsets of refined().
  CosetDecomposition torsion_and_cosets() const;

  friend bool operator==(const TreeGroup& x, const TreeGroup& y) {
    return x.p_ == y.p_ && x.level_ == y.level_;
  }

 private:
  void check(GroupElement a) const;

  unsigned p_;
  unsigned level_;
  std::uint64_t size_;
  std::uint64_t cap_;
};

}  // namespace padic_dbn
