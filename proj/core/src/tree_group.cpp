#include "padic_dbn/tree_group.hpp"

#include <fmt/format.h>

#include "padic_dbn/errors.hpp"

namespace padic_dbn {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

TreeGroup::TreeGroup(unsigned p, unsigned level, std::uint64_t cap)
    : p_(p), level_(level), size_(1), cap_(cap) {
  if (!is_prime(p)) throw DomainError(fmt::format("{} is not prime", p));
  if (level < 1) throw DomainError("level must be at least 1");
  for (unsigned i = 0; i < level; ++i) {
    if (size_ > cap_ / p) {
      throw CapExceeded(fmt::format("#G_l = {}^{} exceeds the group cap {}", p, level, cap_));
    }
    size_ *= p;
  }
}

std::uint64_t TreeGroup::power(unsigned k) const {
  if (k > level_ + 1) throw DomainError("power: exponent beyond level + 1");
  std::uint64_t r = 1;
  for (unsigned i = 0; i < k; ++i) r *= p_;
  return r;
}

void TreeGroup::check(GroupElement a) const {
  if (!contains(a)) {
    throw DomainError(fmt::format("element {} is outside G_{} (size {})", a.value, level_, size_));
  }
}

GroupElement TreeGroup::element(std::uint64_t value) const {
  GroupElement a{value};
  check(a);
  return a;
}

GroupElement TreeGroup::add(GroupElement a, GroupElement b) const {
  check(a);
  check(b);
  return GroupElement{(a.value + b.value) % size_};
}

GroupElement TreeGroup::neg(GroupElement a) const {
  check(a);
  return GroupElement{(size_ - a.value) % size_};
}

GroupElement TreeGroup::sub(GroupElement a, GroupElement b) const { return add(a, neg(b)); }

unsigned TreeGroup::order(GroupElement a) const {
  check(a);
  if (a.value == 0) return kInfiniteOrder;
  unsigned s = 0;
  for (std::uint64_t x = a.value; x % p_ == 0; x /= p_) ++s;
  return s;
}

Valuation TreeGroup::valuation(GroupElement a) const {
  const unsigned s = order(a);
  if (s == kInfiniteOrder) return Valuation{s, Rational{0}};
  return Valuation{s, inverse_power(p_, static_cast<int>(s))};
}

unsigned TreeGroup::ancestor_level(GroupElement a, GroupElement b) const {
  const unsigned s = order(sub(a, b));
  return s == kInfiniteOrder ? level_ : s;
}

Rational TreeGroup::distance(GroupElement a, GroupElement b) const { return valuation(sub(a, b)).norm; }

std::vector<unsigned> TreeGroup::digits(GroupElement a) const {
  check(a);
  std::vector<unsigned> out(level_);
  std::uint64_t x = a.value;
  for (unsigned i = 0; i < level_; ++i) {
    out[i] = static_cast<unsigned>(x % p_);
    x /= p_;
  }
  return out;
}

GroupElement TreeGroup::from_digits(std::span<const unsigned> digits) const {
  if (digits.size() != level_) throw DomainError("from_digits: wrong number of digits");
  std::uint64_t value = 0;
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (digits[i] >= p_) throw DomainError("from_digits: digit out of range");
    value = value * p_ + digits[i];
  }
  return GroupElement{value};
}

TreeGroup TreeGroup::refined() const { return TreeGroup(p_, level_ + 1, cap_); }

TreeGroup TreeGroup::coarsened() const {
  if (level_ < 2) throw DomainError("coarsened: G_1 has no coarser level");
  return TreeGroup(p_, level_ - 1, cap_);
}

GroupElement TreeGroup::project(GroupElement a) const {
  check(a);
  return GroupElement{a.value % (size_ / p_)};
}

GroupElement TreeGroup::lift(GroupElement a) const {
  check(a);
  return a;
}

CosetDecomposition TreeGroup::torsion_and_cosets() const {
  const TreeGroup hi = refined();
  CosetDecomposition out;
  for (unsigned t = 0; t < p_; ++t) out.torsion.push_back(GroupElement{t * size_});
  for (GroupElement t : out.torsion) {
    std::vector<GroupElement> coset;
    coset.reserve(size_);
    for (std::uint64_t i = 0; i < size_; ++i) coset.push_back(hi.add(GroupElement{i}, t));
    out.cosets.push_back(std::move(coset));
  }
  return out;
}

}  // namespace padic_dbn
