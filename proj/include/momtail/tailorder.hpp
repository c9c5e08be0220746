#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "momtail/measures.hpp"

namespace momtail {

// Sign conventions: every sign below is sign(s_k(mu2) - s_k(mu1)). A positive
// eventual sign means mu1 is below mu2 in the tail order.

struct CdfDominance {
  Rational x0;
};
struct DensityDominance {
  Rational x0;
};
/// The difference d2 - d1 has constant sign on (lo, hi] and vanishes right of hi.
struct RightmostDifference {
  Rational lo;
  Rational hi;
  int sign = 0;
};
struct MomentPrefix {
  unsigned long n0 = 0;
  unsigned long checked_to = 0;
};
using Certificate = std::variant<CdfDominance, DensityDominance, RightmostDifference, MomentPrefix>;

struct StrictlyBelow {
  Certificate certificate;
};
struct StrictlyAbove {
  Certificate certificate;
};
struct EqualPrefix {
  unsigned long agree_from = 0;
};
struct AlternationWitness {
  std::vector<std::pair<unsigned long, int>> indices;
};
struct Undetermined {
  unsigned long depth = 0;
};

enum class Evidence { Heuristic, Proved };

struct TailVerdict {
  std::variant<StrictlyBelow, StrictlyAbove, EqualPrefix, AlternationWitness, Undetermined> outcome;
  Evidence evidence = Evidence::Heuristic;
  std::string detail;

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(outcome);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(outcome);
  }
};

/// Per-index sign of s_k(mu2) - s_k(mu1); kIndeterminate when the moment
/// intervals overlap zero without being exactly zero.
inline constexpr int kIndeterminate = 2;
std::vector<int> moment_difference_signs(const Measure& mu1, const Measure& mu2, unsigned long K,
                                         const PrecisionBudget& budget = {});

struct CompareOptions {
  unsigned long depth = 200;
  /// Indices to report in an alternation witness when they alternate (for
  /// example a construction's chosen exponents).
  std::vector<unsigned long> focus;
};

/// Prefix scan of moment differences up to the requested depth. The result is
/// always labeled heuristic: a finite prefix cannot prove eventual dominance.
TailVerdict compare_empirical(const Measure& mu1, const Measure& mu2, const CompareOptions& options = {},
                              const PrecisionBudget& budget = {});

/// Exact decision for piecewise-polynomial densities via the sign of the
/// difference just left of its rightmost zero-free stretch.
TailVerdict decide_piecewise(const PiecewisePolyDensity& d1, const PiecewisePolyDensity& d2);

struct CertifyResult {
  bool certified = false;
  TailVerdict verdict;
  /// A point where a hypothesis fails, when one was found.
  std::optional<Rational> witness;
  std::string detail;
};

/// F1 >= F2 on [x0, b] with F1(x0) > F2(x0) implies mu1 below mu2.
CertifyResult certify_cdf_dominance(const Measure& mu1, const Measure& mu2, const Rational& x0);

struct PositivityCertificate {
  bool certified = false;
  /// First k with a strictly positive moment, once the hypotheses hold.
  std::optional<unsigned long> n0;
  std::optional<Rational> witness;
  std::string detail;
};

/// f(x0) > 0 and f >= 0 on [x0, b] imply that the k-th moment of f is
/// eventually positive; n0 is found by an exact moment scan up to `cap`.
PositivityCertificate certify_eventual_positive(const PiecewisePolyDensity& f, const Rational& x0,
                                                unsigned long cap = 10000);

/// d2 - d1 >= 0 on [x0, b], positive at x0, implies d1 below d2.
CertifyResult certify_density_dominance(const PiecewisePolyDensity& d1, const PiecewisePolyDensity& d2,
                                        const Rational& x0, unsigned long cap = 10000);

}  // namespace momtail
