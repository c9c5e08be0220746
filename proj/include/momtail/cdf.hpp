#pragma once

#include <vector>

#include "momtail/measures.hpp"

namespace momtail {

/// Exact CDF of a finite discrete measure or an unsigned density.
///
/// F = 0 left of knots[0]; on [knots[i], knots[i+1]) it equals segments[i],
/// and on [knots.back(), inf) the constant segments.back(). Right-continuous
/// by construction: an atom's mass is included in the segment starting there.
struct PiecewiseCdf {
  std::vector<Rational> knots;
  std::vector<Polynomial> segments;

  Rational operator()(const Rational& x) const;
  /// Segment polynomial valid at x (zero left of the first knot).
  Polynomial segment_at(const Rational& x) const;
};

/// Throws InputError for signed densities and for DiscreteRule measures, whose
/// CDF is only known up to a tail interval.
PiecewiseCdf exact_cdf(const Measure& mu);

}  // namespace momtail
