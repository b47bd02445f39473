#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace qdburst {

// Exact rationals (GMP). Always canonical after construction through the
// helpers below.
using Rational = mpq_class;
using BigInt = mpz_class;

// Parses "p/q", "p" or "-p/q". Throws Error(InvalidSpec) on malformed text
// or a zero denominator.
Rational parse_rational(std::string_view text);

// "num/den", or "num" when the denominator is 1.
std::string format_rational(const Rational& value);

Rational make_rational(std::int64_t num, std::int64_t den = 1);

// num/den in canonical form; den must be nonzero.
Rational ratio(const BigInt& num, const BigInt& den);

BigInt floor_of(const Rational& value);
BigInt ceil_of(const Rational& value);

// Largest r such that every value is an integer multiple of r.
Rational rational_gcd(std::span<const Rational> values);
// Smallest positive r that is an integer multiple of every value.
Rational rational_lcm(std::span<const Rational> values);

inline double to_double(const Rational& value) { return value.get_d(); }

// Narrowing to int64; throws Error(InvalidArg) when out of range.
std::int64_t to_int64(const BigInt& value);

}  // namespace qdburst
