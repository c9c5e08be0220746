#pragma once

#include <vector>

#include "momtail/measures.hpp"

namespace momtail {

/// Evaluates s_k of a piecewise-polynomial density for consecutive k using
/// integer arithmetic only.
///
/// With D the common denominator of the breakpoints (u_b = D * x_b) and
/// Delta_{b,j} the jump of the j-th coefficient across breakpoint b,
///
///   s_k = sum_j 1/(k+j+1) * sum_b Delta_{b,j} * x_b^(k+j+1),
///
/// which is kept as one integer fraction whose big factors u_b^(k+1) and
/// D^(k+J) are updated by a single small multiplication per step. The value
/// is not reduced to lowest terms; use value() when a canonical rational is
/// needed.
class MomentSweep {
 public:
  explicit MomentSweep(const PiecewisePolyDensity& d, unsigned long start = 0);

  unsigned long order() const { return k_; }
  const Integer& numerator() const { return num_; }
  const Integer& denominator() const { return den_; }
  int sign() const { return sgn(num_); }
  Rational value() const;

  void advance();
  void seek(unsigned long k);

 private:
  struct Knot {
    Integer u;
    std::vector<Integer> weights;  // Delta_{b,j} * Q * u^j * D^(J-1-j)
    Integer power;                 // u^(k+1)
  };

  void reset_powers();
  void evaluate();

  std::vector<Knot> knots_;
  Integer common_den_;   // D
  Integer jump_den_;     // Q
  Integer den_power_;    // D^(k+J)
  std::size_t slots_ = 0;  // J
  unsigned long k_ = 0;
  Integer num_;
  Integer den_ = 1;
};

/// Sign of |a| - |b| for two sweep values.
int compare_magnitude(const MomentSweep& a, const MomentSweep& b);

}  // namespace momtail
