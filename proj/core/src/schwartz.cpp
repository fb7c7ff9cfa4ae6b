#include "padic_dbn/schwartz.hpp"

#include <cmath>

#include <fmt/format.h>

#include "padic_dbn/errors.hpp"

namespace padic_dbn {
namespace {

std::uint64_t checked_power(unsigned p, unsigned level) {
  if (!is_prime(p)) throw DomainError(fmt::format("{} is not prime", p));
  std::uint64_t n = 1;
  for (unsigned i = 0; i < level; ++i) {
    if (n > kDefaultGroupCap / p) throw CapExceeded("test function level too large");
    n *= p;
  }
  return n;
}

void require_level(unsigned constancy, const TreeGroup& g) {
  if (g.level() < constancy) {
    throw DomainError(fmt::format(
        "discretization at l = {} is not exact for a function constant on balls of level {}", g.level(),
        constancy));
  }
}

}  // namespace

TestFunction::TestFunction(unsigned p, unsigned level, std::vector<Rational> coeffs)
    : p_(p), level_(level), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != checked_power(p, level)) {
    throw DomainError(fmt::format("test function needs {}^{} coefficients, got {}", p, level, coeffs_.size()));
  }
}

TestFunction::TestFunction(unsigned p, unsigned level, std::span<const double> coeffs)
    : TestFunction(p, level, [&] {
        std::vector<Rational> r;
        r.reserve(coeffs.size());
        for (double c : coeffs) r.push_back(exact_rational(c));
        return r;
      }()) {}

TestFunction TestFunction::constant(unsigned p, Rational c) { return TestFunction(p, 0, std::vector{std::move(c)}); }

TestFunction TestFunction::ball_indicator(unsigned p, std::uint64_t center, unsigned radius_level) {
  const std::uint64_t n = checked_power(p, radius_level);
  std::vector<Rational> coeffs(n, Rational{0});
  coeffs[center % n] = 1;
  return TestFunction(p, radius_level, std::move(coeffs));
}

TestFunction TestFunction::refined() const {
  const std::uint64_t n = coeffs_.size() * p_;
  std::vector<Rational> coeffs;
  coeffs.reserve(n);
  for (std::uint64_t x = 0; x < n; ++x) coeffs.push_back(at(x));
  return TestFunction(p_, level_ + 1, std::move(coeffs));
}

TestFunction TestFunction::scaled(const Rational& c) const {
  std::vector<Rational> coeffs = coeffs_;
  for (auto& x : coeffs) x *= c;
  return TestFunction(p_, level_, std::move(coeffs));
}

TestFunction2::TestFunction2(unsigned p, unsigned level, std::vector<Rational> coeffs)
    : p_(p), level_(level), side_(checked_power(p, level)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != side_ * side_) throw DomainError("two-variable test function has the wrong size");
}

TestFunction2 TestFunction2::separable(const TestFunction& u, const TestFunction& v) {
  if (u.prime() != v.prime()) throw DomainError("separable: primes differ");
  const unsigned level = std::max(u.level(), v.level());
  const std::uint64_t side = checked_power(u.prime(), level);
  std::vector<Rational> coeffs;
  coeffs.reserve(side * side);
  for (std::uint64_t x = 0; x < side; ++x) {
    for (std::uint64_t y = 0; y < side; ++y) coeffs.push_back(u.at(x) * v.at(y));
  }
  return TestFunction2(u.prime(), level, std::move(coeffs));
}

RadialProfile RadialProfile::from_doubles(unsigned p, std::span<const double> shells, double tail) {
  RadialProfile w;
  w.p = p;
  for (double s : shells) {
    if (!std::isfinite(s)) throw DomainError("radial profile: non-finite shell value");
    w.shells.push_back(exact_rational(s));
  }
  if (!std::isfinite(tail)) throw DomainError("radial profile: non-finite tail value");
  w.tail = exact_rational(tail);
  return w;
}

Rational evaluate(const TestFunction& f, std::span<const unsigned> digits) {
  if (digits.size() < f.level()) {
    throw DomainError(fmt::format("evaluate: need at least {} digits, got {}", f.level(), digits.size()));
  }
  std::uint64_t x = 0;
  for (std::size_t i = f.level(); i-- > 0;) {
    if (digits[i] >= f.prime()) throw DomainError("evaluate: digit out of range");
    x = x * f.prime() + digits[i];
  }
  return f.at(x);
}

Rational haar_integral(const TestFunction& f) {
  Rational sum{0};
  for (const auto& c : f.coeffs()) sum += c;
  return sum * inverse_power(f.prime(), static_cast<int>(f.level()));
}

Rational radial_ball_integral(const RadialProfile& w, unsigned l) {
  // The ball p^l Z_p is the disjoint union of the shells |z| = p^-m, m >= l, each of mass p^-m (1 - 1/p).
  const Rational shell_factor = Rational{1} - inverse_power(w.p, 1);
  Rational sum{0};
  const auto explicit_end = static_cast<unsigned>(w.shells.size());
  for (unsigned m = l; m < explicit_end; ++m) {
    sum += w.shells[m] * inverse_power(w.p, static_cast<int>(m)) * shell_factor;
  }
  // Constant tail: the whole ball p^max(l, R) Z_p.
  sum += w.tail * inverse_power(w.p, static_cast<int>(std::max(l, explicit_end)));
  return sum;
}

std::vector<Rational> discretize_conv_kernel(const TestFunction& w, const TreeGroup& g) {
  if (w.prime() != g.prime()) throw DomainError("discretize: prime mismatch");
  require_level(w.level(), g);
  const Rational scale = inverse_power(g.prime(), 2 * static_cast<int>(g.level()));
  std::vector<Rational> kernel;
  kernel.reserve(g.size());
  for (std::uint64_t k = 0; k < g.size(); ++k) kernel.push_back(scale * w.at(k));
  return kernel;
}

std::vector<Rational> discretize_kernel2(const TestFunction2& w, const TreeGroup& g) {
  if (w.prime() != g.prime()) throw DomainError("discretize: prime mismatch");
  require_level(w.level(), g);
  const Rational scale = inverse_power(g.prime(), 2 * static_cast<int>(g.level()));
  std::vector<Rational> matrix;
  matrix.reserve(g.size() * g.size());
  for (std::uint64_t i = 0; i < g.size(); ++i) {
    for (std::uint64_t j = 0; j < g.size(); ++j) matrix.push_back(scale * w.at(i, j));
  }
  return matrix;
}

std::vector<Rational> discretize_bias(const TestFunction& a, const TreeGroup& g) {
  if (a.prime() != g.prime()) throw DomainError("discretize: prime mismatch");
  require_level(a.level(), g);
  const Rational scale = inverse_power(g.prime(), static_cast<int>(g.level()));
  std::vector<Rational> bias;
  bias.reserve(g.size());
  for (std::uint64_t i = 0; i < g.size(); ++i) bias.push_back(scale * a.at(i));
  return bias;
}

RadialCoefficients radial_coefficients(const RadialProfile& w, const TreeGroup& g) {
  if (w.p != g.prime()) throw DomainError("radial_coefficients: prime mismatch");
  const int l = static_cast<int>(g.level());
  RadialCoefficients out;
  const Rational scale = inverse_power(g.prime(), 2 * l);
  for (unsigned m = 0; m < g.level(); ++m) out.offdiag.push_back(scale * w.at_order(m));
  out.diag = inverse_power(g.prime(), l) * radial_ball_integral(w, g.level());
  return out;
}

}  // namespace padic_dbn
