#pragma once

#include <bit>
#include <cstdint>

#include "padic_dbn/errors.hpp"
#include "padic_dbn/tree_group.hpp"

namespace padic_dbn {

// Binary field over G_l; bit i is the unit at representative i.
class FieldConfig {
 public:
  FieldConfig(std::uint64_t bits, unsigned width) : bits_(bits), width_(width) {
    if (width > 63) throw DomainError("field width above 63 units");
    if (bits >> width != 0) throw DomainError("field bits exceed width");
  }

  static FieldConfig zeros(unsigned width) { return FieldConfig(0, width); }

  std::uint64_t bits() const { return bits_; }
  unsigned width() const { return width_; }
  bool operator[](std::size_t i) const { return (bits_ >> i) & 1u; }
  unsigned popcount() const { return static_cast<unsigned>(std::popcount(bits_)); }

  FieldConfig with(std::size_t i, bool on) const {
    const std::uint64_t mask = std::uint64_t{1} << i;
    return FieldConfig(on ? (bits_ | mask) : (bits_ & ~mask), width_);
  }

  // (shifted(t))_j = this_{j+t}.
  FieldConfig shifted(const TreeGroup& g, GroupElement t) const {
    if (g.size() != width_) throw DomainError("shift: group and width differ");
    std::uint64_t out = 0;
    for (std::uint64_t j = 0; j < width_; ++j) {
      if ((*this)[g.add(GroupElement{j}, t).value]) out |= std::uint64_t{1} << j;
    }
    return FieldConfig(out, width_);
  }

  friend bool operator==(const FieldConfig&, const FieldConfig&) = default;

 private:
  std::uint64_t bits_;
  unsigned width_;
};

}  // namespace padic_dbn
