#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace gacomb {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "n" or "n/d" (optional leading '-'). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Always "n/d", lowest terms, denominator positive.
std::string format_rational(const Rational& r);

BigInt floor_of(const Rational& r);
BigInt ceil_of(const Rational& r);
Rational rational_pow(const Rational& base, unsigned exponent);

inline Rational ratio(std::uint64_t num, std::uint64_t den) {
  return Rational(BigInt(num), BigInt(den));
}

/// Number of binary digits of n; bit_length(0) == 0. Upper bound for log2(n) + 1
/// and hence for the natural log, used wherever a log term must stay rational.
unsigned bit_length(std::uint64_t n);
unsigned bit_length(const BigInt& n);

/// Checked 64-bit arithmetic; throws std::overflow_error instead of wrapping.
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);

}  // namespace gacomb
