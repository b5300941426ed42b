#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace hs6v {

/// Arbitrary-precision rational number (always kept canonical).
using Rational = mpq_class;

/// Parses "3", "-2/7", "0.125" or "1e-3" exactly. Throws DomainError on junk.
Rational parse_rational(std::string_view text);

/// base^exponent for any integer exponent; 0^0 = 1, 0^negative throws.
Rational pow(const Rational& base, long exponent);

/// Canonical "p/q" (or "p" when the denominator is 1).
std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace hs6v
