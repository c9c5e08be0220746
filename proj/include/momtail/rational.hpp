#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace momtail {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p/q", "p", or a plain decimal such as "-0.35" into an exact rational.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// n / d in lowest terms. The two-argument mpq_class constructor does not
/// reduce, and every comparison assumes canonical form.
Rational ratio(const Integer& n, const Integer& d);

Rational pow(const Rational& base, unsigned long exponent);
Rational abs_value(const Rational& q);
int sign(const Rational& q);
double to_double(const Rational& q);

/// Bits in numerator plus denominator.
std::size_t bit_size(const Rational& q);

/// Upper bound on the size of any exact intermediate value. Exceeding it
/// raises PrecisionExceeded instead of silently rounding.
struct PrecisionBudget {
  std::size_t max_bits = std::size_t{1} << 26;

  void check(const Rational& q, std::string_view what) const;
  void check(const Integer& z, std::string_view what) const;
};

}  // namespace momtail
