#include "hs6v/rational.hpp"

#include <cctype>

#include "hs6v/errors.hpp"

namespace hs6v {

namespace {

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// Decimal literal with optional fraction and exponent, e.g. "-1.25e-3".
Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!is_digits(exp_part) || exp_part.size() > 6)
      throw DomainError("malformed exponent in rational literal '" + std::string(text) + "'");
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if ((!int_part.empty() && !is_digits(int_part)) || (!frac_part.empty() && !is_digits(frac_part)) ||
        (int_part.empty() && frac_part.empty()))
      throw DomainError("malformed rational literal '" + std::string(text) + "'");
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!is_digits(s)) throw DomainError("malformed rational literal '" + std::string(text) + "'");
    digits = std::string(s);
  }
  Rational value(mpz_class(digits, 10));
  value *= pow(Rational(10), exponent);
  if (negative) value = -value;
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw DomainError("empty rational literal");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(text.substr(0, slash));
    Rational den = parse_decimal(text.substr(slash + 1));
    if (den == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  return parse_decimal(text);
}

Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw DomainError("zero raised to a negative power");
    Rational inv = 1 / base;
    return pow(inv, -exponent);
  }
  Rational result(1);
  mpz_pow_ui(result.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(result.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  result.canonicalize();
  return result;
}

std::string to_string(const Rational& value) {
  Rational canonical = value;
  canonical.canonicalize();
  return canonical.get_str();
}

}  // namespace hs6v
