#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace padic_dbn {

using Rational = boost::multiprecision::cpp_rational;

// Exact value of a finite double (every double is a dyadic rational).
Rational exact_rational(double x);

double to_double(const Rational& r);

// p^(-k) for k >= 0, or p^k when k is negative.
Rational inverse_power(unsigned p, int k);

std::string to_string(const Rational& r);

// Uniform conversion helpers so templates can be written once for double and Rational.
template <class T>
T scalar_from(double x);

template <>
inline double scalar_from<double>(double x) { return x; }

template <>
inline Rational scalar_from<Rational>(double x) { return exact_rational(x); }

template <class T>
T scalar_from(const Rational& r);

template <>
inline double scalar_from<double>(const Rational& r) { return to_double(r); }

template <>
inline Rational scalar_from<Rational>(const Rational& r) { return r; }

}  // namespace padic_dbn
