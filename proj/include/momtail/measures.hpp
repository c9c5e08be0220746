#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "momtail/polynomial.hpp"
#include "momtail/rational.hpp"

namespace momtail {

struct Atom {
  Rational location;
  Rational mass;
};

/// Finitely many point masses, all locations and masses strictly positive.
struct DiscreteFinite {
  std::vector<Atom> atoms;
};

/// x_k = p - q / (k + r) for k >= 1, or the midpoint (x_k + x_{k+1}) / 2.
struct LocationRule {
  enum class Form { Reciprocal, ReciprocalMidpoint };
  Form form = Form::Reciprocal;
  Rational p = 2;
  Rational q = 1;
  Rational r = 1;

  Rational at(unsigned long k) const;
  /// The same affine-reciprocal family without the midpoint step.
  LocationRule base() const { return {Form::Reciprocal, p, q, r}; }
};

/// Geometric:        mass_k = scale * ratio^k
/// DampedGeometric:  mass_k = scale * ratio^k * max{x_k / y_k, 1 - ratio^k},
///                   x_k from `damping`, y_k its midpoint rule.
struct MassRule {
  enum class Form { Geometric, DampedGeometric };
  Form form = Form::Geometric;
  Rational scale = 1;
  Rational ratio = Rational(1, 2);
  LocationRule damping;

  Rational at(unsigned long k) const;
  /// Upper bound on the mass of all atoms with index > k.
  Rational tail_bound(unsigned long k) const;
};

/// Countable discrete measure: explicit head atoms plus a closed-form rule for
/// atoms k = 1, 2, ..., evaluated exactly up to `truncation` with the rest
/// bounded by the rule's tail bound.
struct DiscreteRule {
  std::vector<Atom> head;
  LocationRule location;
  MassRule mass;
  unsigned long truncation = 1;
  Rational support_upper_bound = 2;

  /// Head plus rule atoms 1..truncation.
  DiscreteFinite truncated() const;
};

/// Density on [x_0, x_m] given by one polynomial per breakpoint interval;
/// zero outside. `is_signed` densities may take negative values.
struct PiecewisePolyDensity {
  std::vector<Rational> breakpoints;
  std::vector<Polynomial> pieces;
  bool is_signed = false;

  const Rational& lower() const { return breakpoints.front(); }
  const Rational& upper() const { return breakpoints.back(); }
  /// Density value at x, using the piece whose half-open interval [x_i, x_{i+1})
  /// contains x (the last piece is closed on the right).
  Rational value_at(const Rational& x) const;
};

using Measure = std::variant<DiscreteFinite, DiscreteRule, PiecewisePolyDensity>;

/// Exact moment, or an interval [value - error_radius, value + error_radius]
/// guaranteed to contain it.
struct MomentValue {
  Rational value;
  Rational error_radius;

  bool exact() const { return error_radius == 0; }
  Rational lower() const { return value - error_radius; }
  Rational upper() const { return value + error_radius; }
};

/// Throws InputError when an invariant of the representation is violated.
void validate(const Measure& mu);
void validate(const PiecewisePolyDensity& d);

bool is_signed(const Measure& mu);
/// Smallest interval [a, b] known to contain the support.
std::pair<Rational, Rational> support_bounds(const Measure& mu);

MomentValue moment(const Measure& mu, unsigned long k, const PrecisionBudget& budget = {});
/// Moments 0..k_max, evaluated incrementally.
std::vector<MomentValue> moment_table(const Measure& mu, unsigned long k_max, const PrecisionBudget& budget = {});
MomentValue total_mass(const Measure& mu, const PrecisionBudget& budget = {});
/// mu([0, x]); rejects signed densities.
MomentValue cdf(const Measure& mu, const Rational& x);
/// Sum_{k=1}^{K} s_k^{-1/(2k)}. A prefix says nothing about divergence; this is
/// a diagnostic only.
double carleman_partial_sum(const Measure& mu, unsigned long K);

// ---------------------------------------------------------------------------
// Density algebra.

PiecewisePolyDensity make_density(std::vector<Rational> breakpoints, std::vector<Polynomial> pieces,
                                  bool is_signed = false);
PiecewisePolyDensity uniform_density(const Rational& lo, const Rational& hi);
/// alpha * a + beta * b on the common refinement of the breakpoints. The
/// result is flagged signed unless both inputs are unsigned and both weights
/// are nonnegative.
PiecewisePolyDensity combine(const Rational& alpha, const PiecewisePolyDensity& a, const Rational& beta,
                             const PiecewisePolyDensity& b);
PiecewisePolyDensity scaled(const PiecewisePolyDensity& d, const Rational& factor);
/// Merges adjacent pieces with identical polynomials and trims leading and
/// trailing zero pieces (keeping at least one piece).
PiecewisePolyDensity simplified(PiecewisePolyDensity d);
/// Piecewise derivative (pieces only; continuity is not checked).
PiecewisePolyDensity derivative(const PiecewisePolyDensity& d);
/// Exact check that d >= 0 everywhere; returns a negative point if not.
std::optional<Rational> find_negative_value(const PiecewisePolyDensity& d);
/// Same pieces and breakpoints after simplification.
bool same_density(const PiecewisePolyDensity& a, const PiecewisePolyDensity& b);

}  // namespace momtail
