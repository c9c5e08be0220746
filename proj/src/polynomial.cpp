#include "momtail/polynomial.hpp"

#include <algorithm>

#include "momtail/errors.hpp"

namespace momtail {

Polynomial::Polynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Polynomial Polynomial::constant(const Rational& c) { return Polynomial(std::vector<Rational>{c}); }

Polynomial Polynomial::monomial(const Rational& c, std::size_t power) {
  std::vector<Rational> v(power + 1);
  v[power] = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::linear_factor(const Rational& root) {
  return Polynomial(std::vector<Rational>{Rational(-root), Rational(1)});
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<unsigned long>(i);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
  if (coeffs_.empty()) return {};
  std::vector<Rational> a(coeffs_.size() + 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) a[i + 1] = coeffs_[i] / static_cast<unsigned long>(i + 1);
  return Polynomial(std::move(a));
}

Rational Polynomial::integrate(const Rational& lo, const Rational& hi) const {
  Polynomial anti = antiderivative();
  return anti(hi) - anti(lo);
}

Rational Polynomial::integrate_times_power(const Rational& lo, const Rational& hi, unsigned long k) const {
  Rational total = 0;
  Rational lo_pow = momtail::pow(lo, k + 1);
  Rational hi_pow = momtail::pow(hi, k + 1);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (coeffs_[j] != 0) total += coeffs_[j] * (hi_pow - lo_pow) / static_cast<unsigned long>(k + j + 1);
    lo_pow *= lo;
    hi_pow *= hi;
  }
  return total;
}

Polynomial Polynomial::shifted(const Rational& s) const {
  // Horner in the shifted variable: result = (...(c_n)(x+s) + c_{n-1})...
  Polynomial out;
  Polynomial x_plus_s(std::vector<Rational>{s, Rational(1)});
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    out = out * x_plus_s;
    out += constant(*it);
  }
  return out;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial out = constant(1);
  for (unsigned i = 0; i < exponent; ++i) out = out * *this;
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& x : coeffs_) x *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Polynomial(std::move(out));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw InputError("polynomial division by zero");
  std::vector<Rational> rem = a.coeffs_;
  std::size_t db = b.coeffs_.size() - 1;
  if (rem.size() <= db) return {Polynomial{}, a};
  std::vector<Rational> quot(rem.size() - db);
  for (std::size_t i = rem.size(); i-- > db;) {
    if (rem[i] == 0) continue;
    Rational factor = rem[i] / b.coeffs_.back();
    quot[i - db] = factor;
    for (std::size_t j = 0; j <= db; ++j) rem[i - db + j] -= factor * b.coeffs_[j];
  }
  rem.resize(db);
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return {};
  Polynomial out = *this;
  Rational lead = leading();
  for (auto& c : out.coeffs_) c /= lead;
  return out;
}

Polynomial Polynomial::gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = divmod(a, b).second;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

Polynomial Polynomial::squarefree_part() const {
  if (degree() <= 0) return *this;
  Polynomial g = gcd(*this, derivative());
  if (g.degree() == 0) return monic();
  return divmod(*this, g).first.monic();
}

}  // namespace momtail
