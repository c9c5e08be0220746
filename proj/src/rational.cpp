#include "momtail/rational.hpp"

#include <cctype>

#include "momtail/errors.hpp"

namespace momtail {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw InputError("not a rational number: '" + std::string(whole) + "'");
  Integer z(std::string(s), 10);
  return negative ? Integer(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw InputError("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash), text);
    Integer den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) int_part.remove_prefix(1);
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac.empty() && !all_digits(frac)) ||
        (int_part.empty() && frac.empty()))
      throw InputError("not a rational number: '" + std::string(text) + "'");
    Integer whole = int_part.empty() ? Integer(0) : Integer(std::string(int_part), 10);
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Integer f = frac.empty() ? Integer(0) : Integer(std::string(frac), 10);
    Rational q(whole * scale + f, scale);
    q.canonicalize();
    return negative ? Rational(-q) : q;
  }
  return Rational(parse_integer(text, text));
}

std::string to_string(const Rational& q) { return q.get_str(10); }
std::string to_string(const Integer& z) { return z.get_str(10); }

Rational ratio(const Integer& n, const Integer& d) {
  if (d == 0) throw InputError("zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

Rational pow(const Rational& base, unsigned long exponent) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  // Already canonical when base is; fix the sign convention just in case.
  out.canonicalize();
  return out;
}

Rational abs_value(const Rational& q) { return q < 0 ? Rational(-q) : q; }

int sign(const Rational& q) { return sgn(q); }

double to_double(const Rational& q) { return q.get_d(); }

std::size_t bit_size(const Rational& q) {
  return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

void PrecisionBudget::check(const Rational& q, std::string_view what) const {
  if (bit_size(q) > max_bits)
    throw PrecisionExceeded(std::string(what) + ": exact value needs " + std::to_string(bit_size(q)) +
                            " bits, budget is " + std::to_string(max_bits));
}

void PrecisionBudget::check(const Integer& z, std::string_view what) const {
  std::size_t bits = mpz_sizeinbase(z.get_mpz_t(), 2);
  if (bits > max_bits)
    throw PrecisionExceeded(std::string(what) + ": exact value needs " + std::to_string(bits) +
                            " bits, budget is " + std::to_string(max_bits));
}

}  // namespace momtail
