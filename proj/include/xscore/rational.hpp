#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "xscore/errors.hpp"

namespace xscore {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// C(n, k) computed iteratively; exact, no cache (thread-safe by construction).
BigInt binomial(long long n, long long k);

BigInt factorial(long long n);

// pow(2, e) for e >= 0.
BigInt pow2(long long e);

// Canonical "p/q" in lowest terms, q >= 1; integers render as "p/1".
std::string to_fraction_string(const Rational& r);

std::string to_string(const BigInt& n);

// Accepts "p/q" or a bare integer "p". Throws ParseError otherwise.
Rational rational_from_string(std::string_view s);

// Decimal approximation with 15 significant digits, for --approx output.
std::string approx_decimal(const Rational& r);

} // namespace xscore
