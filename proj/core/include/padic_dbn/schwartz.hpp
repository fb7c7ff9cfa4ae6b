#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "padic_dbn/rational.hpp"
#include "padic_dbn/tree_group.hpp"

namespace padic_dbn {

// Locally constant function on Z_p: value coeffs[x mod p^level] at x.
class TestFunction {
 public:
  TestFunction(unsigned p, unsigned level, std::vector<Rational> coeffs);
  TestFunction(unsigned p, unsigned level, std::span<const double> coeffs);

  static TestFunction constant(unsigned p, Rational c);
  // Indicator of the ball center + p^radius_level Z_p.
  static TestFunction ball_indicator(unsigned p, std::uint64_t center, unsigned radius_level);

  unsigned prime() const { return p_; }
  unsigned level() const { return level_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  // Value at the residue class of an integer point.
  const Rational& at(std::uint64_t x) const { return coeffs_[x % coeffs_.size()]; }
  // Same function expressed on balls of radius p^-(level+1).
  TestFunction refined() const;
  TestFunction scaled(const Rational& c) const;

 private:
  unsigned p_;
  unsigned level_;
  std::vector<Rational> coeffs_;
};

// Locally constant function on Z_p x Z_p; coeffs[i * p^level + j] is the value on (i, j) balls.
class TestFunction2 {
 public:
  TestFunction2(unsigned p, unsigned level, std::vector<Rational> coeffs);

  static TestFunction2 separable(const TestFunction& u, const TestFunction& v);

  unsigned prime() const { return p_; }
  unsigned level() const { return level_; }
  std::uint64_t side() const { return side_; }
  const Rational& at(std::uint64_t x, std::uint64_t y) const {
    return coeffs_[(x % side_) * side_ + (y % side_)];
  }

 private:
  unsigned p_;
  unsigned level_;
  std::uint64_t side_;
  std::vector<Rational> coeffs_;
};

// Radial profile w(|z|_p): shells[m] on |z|_p = p^-m for m < shells.size(), tail on the rest of the ball
// p^shells.size() Z_p (origin included).
struct RadialProfile {
  unsigned p = 2;
  std::vector<Rational> shells;
  Rational tail;

  static RadialProfile from_doubles(unsigned p, std::span<const double> shells, double tail);
  const Rational& at_order(unsigned m) const { return m < shells.size() ? shells[m] : tail; }
};

struct RadialCoefficients {
  std::vector<Rational> offdiag;  // offdiag[m] = p^(-2l) w(p^-m), m = 0..l-1
  Rational diag;                  // p^(-l) * integral of w(|z|) over p^l Z_p
};

// Value at a truncated p-adic point given by its digits (least significant first).
Rational evaluate(const TestFunction& f, std::span<const unsigned> digits);

Rational haar_integral(const TestFunction& f);

// Integral of w(|z|_p) over the ball p^l Z_p, exact.
Rational radial_ball_integral(const RadialProfile& w, unsigned l);

std::vector<Rational> discretize_conv_kernel(const TestFunction& w, const TreeGroup& g);
std::vector<Rational> discretize_kernel2(const TestFunction2& w, const TreeGroup& g);
std::vector<Rational> discretize_bias(const TestFunction& a, const TreeGroup& g);
RadialCoefficients radial_coefficients(const RadialProfile& w, const TreeGroup& g);

}  // namespace padic_dbn
