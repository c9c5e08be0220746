#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "momtail/rational.hpp"

namespace momtail {

/// Dense univariate polynomial over Q, coefficients stored low-to-high.
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// an empty coefficient list and degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients);

  static Polynomial constant(const Rational& c);
  static Polynomial monomial(const Rational& c, std::size_t power);
  /// (x - root)
  static Polynomial linear_factor(const Rational& root);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coefficients() const { return coeffs_; }
  Rational coefficient(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rational(0); }
  const Rational& leading() const { return coeffs_.back(); }

  Rational operator()(const Rational& x) const;

  Polynomial derivative() const;
  /// Antiderivative with zero constant term.
  Polynomial antiderivative() const;
  Rational integrate(const Rational& lo, const Rational& hi) const;
  /// Exact value of the integral of p(x) * x^k over [lo, hi].
  Rational integrate_times_power(const Rational& lo, const Rational& hi, unsigned long k) const;

  /// p(x + s)
  Polynomial shifted(const Rational& s) const;
  Polynomial pow(unsigned exponent) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

  /// Euclidean division; divisor must be nonzero.
  static std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);
  /// Monic gcd (zero if both are zero).
  static Polynomial gcd(Polynomial a, Polynomial b);
  Polynomial monic() const;
  /// p / gcd(p, p'): same distinct roots, all simple.
  Polynomial squarefree_part() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

// ---------------------------------------------------------------------------
// Exact real root isolation (Sturm sequences + bisection on rational points).

/// Contains exactly one distinct real root. When lo == hi the root is that
/// rational; otherwise the root lies strictly inside (lo, hi).
struct RootInterval {
  Rational lo;
  Rational hi;
  bool is_exact() const { return lo == hi; }
};

class SturmSequence {
 public:
  /// p must be nonzero; the sequence is built on its squarefree part.
  explicit SturmSequence(const Polynomial& p);

  /// Number of distinct roots in the half-open interval (lo, hi].
  int count_roots(const Rational& lo, const Rational& hi) const;
  const Polynomial& squarefree() const { return chain_.front(); }

 private:
  int variations(const Rational& x) const;
  std::vector<Polynomial> chain_;
};

/// Distinct real roots of p strictly inside (lo, hi), in increasing order.
std::vector<RootInterval> isolate_roots(const Polynomial& p, const Rational& lo, const Rational& hi);

/// Shrinks a non-exact interval to width at most `width`, keeping the root.
void refine_root(const SturmSequence& sturm, RootInterval& root, const Rational& width);

/// One rational point inside every maximal root-free open subinterval of
/// (lo, hi). The sign of p is constant (and nonzero) on each such subinterval.
std::vector<Rational> sign_sample_points(const Polynomial& p, const Rational& lo, const Rational& hi);

/// A point of [lo, hi] where p < 0, if any.
std::optional<Rational> find_negative_point(const Polynomial& p, const Rational& lo, const Rational& hi);
bool nonnegative_on(const Polynomial& p, const Rational& lo, const Rational& hi);

/// Number of sign changes of p on (lo, hi) (roots of odd multiplicity).
int count_sign_changes(const Polynomial& p, const Rational& lo, const Rational& hi);

/// Rational lower bound on min p over [lo, hi]. Exact when the minimum is
/// attained at an endpoint or at a rational critical point.
Rational lower_bound_on(const Polynomial& p, const Rational& lo, const Rational& hi);
/// Rational upper bound on max |p| over [lo, hi].
Rational abs_upper_bound_on(const Polynomial& p, const Rational& lo, const Rational& hi);

}  // namespace momtail
