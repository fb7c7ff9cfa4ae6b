#include "padic_dbn/rational.hpp"

#include <cmath>

#include "padic_dbn/errors.hpp"

namespace padic_dbn {

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw DomainError("exact_rational: non-finite value");
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  // 53 bits of mantissa fit exactly into an int64.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r{scaled};
  const boost::multiprecision::cpp_int two_pow = boost::multiprecision::pow(
      boost::multiprecision::cpp_int{2}, static_cast<unsigned>(std::abs(exponent)));
  if (exponent >= 0) {
    r *= Rational{two_pow};
  } else {
    r /= Rational{two_pow};
  }
  return r;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational inverse_power(unsigned p, int k) {
  const boost::multiprecision::cpp_int base =
      boost::multiprecision::pow(boost::multiprecision::cpp_int{p}, static_cast<unsigned>(std::abs(k)));
  if (k >= 0) return Rational{boost::multiprecision::cpp_int{1}, base};
  return Rational{base};
}

std::string to_string(const Rational& r) { return r.str(); }

}  // namespace padic_dbn
