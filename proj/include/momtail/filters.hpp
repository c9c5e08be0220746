#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "momtail/rational.hpp"

namespace momtail {

/// {c * r^k : k >= 0} with c >= 1, r >= 2.
struct GeometricAtom {
  std::uint64_t c = 1;
  std::uint64_t r = 2;
  friend bool operator==(const GeometricAtom&, const GeometricAtom&) = default;
  friend auto operator<=>(const GeometricAtom&, const GeometricAtom&) = default;
};

/// Subset of N = {0, 1, 2, ...} that is eventually periodic up to finitely
/// many geometric atoms.
///
/// n < threshold: membership is below[n].
/// n >= threshold: membership is table[n mod period][pattern(n)], where bit i
/// of pattern(n) says whether n lies in atoms[i].
///
/// Arithmetic progressions, finite sets, geometric sets and everything built
/// from them by union, intersection, difference and complement stay in this
/// class, so all queries below are decided exactly.
class StructuredSet {
 public:
  static StructuredSet empty();
  static StructuredSet naturals();
  static StructuredSet finite(std::vector<std::uint64_t> elements);
  /// {start + k * step : k >= 0}; step 0 gives {start}.
  static StructuredSet progression(std::uint64_t start, std::uint64_t step);
  static StructuredSet geometric(std::uint64_t c, std::uint64_t r);
  /// {n : n >= start}
  static StructuredSet from(std::uint64_t start) { return progression(start, 1); }

  bool contains(std::uint64_t n) const;

  friend StructuredSet operator|(const StructuredSet& a, const StructuredSet& b);
  friend StructuredSet operator&(const StructuredSet& a, const StructuredSet& b);
  friend StructuredSet operator-(const StructuredSet& a, const StructuredSet& b);
  StructuredSet complement() const;

  bool is_empty() const;
  bool is_finite() const;
  /// Some element, if any.
  std::optional<std::uint64_t> some_element() const;
  /// Elements below `limit`, in increasing order.
  std::vector<std::uint64_t> elements_below(std::uint64_t limit) const;

  std::uint64_t threshold() const { return threshold_; }
  std::uint64_t period() const { return period_; }
  const std::vector<GeometricAtom>& atoms() const { return atoms_; }
  std::string describe() const;

  friend bool operator==(const StructuredSet&, const StructuredSet&) = default;

  /// Upper bound on table entries (period * 2^atoms).
  static constexpr std::size_t kMaxTable = std::size_t{1} << 20;

 private:
  friend struct ThetaAnalysis;
  friend struct SetAlgebra;
  bool periodic_member(std::uint64_t n) const;
  unsigned pattern(std::uint64_t n) const;
  void canonicalize();

  std::uint64_t threshold_ = 0;
  std::vector<bool> below_;
  std::uint64_t period_ = 1;
  std::vector<GeometricAtom> atoms_;
  std::vector<std::vector<bool>> table_;  // [residue][pattern]
};

struct ThetaResult {
  bool diverges = false;
  /// Exact sum of 1/n over n >= 1 in the set, when it converges.
  Rational value;
  /// Residue class (mod period, from the threshold on) of density > 0 when
  /// the sum diverges.
  std::uint64_t residue = 0;
  std::uint64_t modulus = 1;
  std::uint64_t from = 0;
};

ThetaResult theta(const StructuredSet& s);

bool in_frechet(const StructuredSet& s);
bool in_msz_filter(const StructuredSet& s);

struct MszVerdict {
  enum class Kind { Certified, NotMSz, UndecidedPrefix };
  Kind kind = Kind::UndecidedPrefix;
  Rational partial_sum;  // theta of the prefix, or of the set when it converges
  std::size_t runs = 0;
  std::string detail;
};

MszVerdict is_msz_sequence(const StructuredSet& s);
/// `runs` are inclusive [start, end] blocks of consecutive integers; each must
/// lie in the prefix, the blocks must be disjoint, and each must contribute
/// at least 1/2 to theta. An empty run list yields UndecidedPrefix.
MszVerdict is_msz_sequence(const std::vector<std::uint64_t>& prefix,
                           const std::vector<std::pair<std::uint64_t, std::uint64_t>>& runs);

struct FipResult {
  bool holds = false;
  bool fast_path = false;
  /// Indices into the family whose intersection is empty.
  std::vector<std::size_t> witness;
};

/// Throws SizeBoundExceeded when the family exceeds `bound` and the fast path
/// (all cofinite but at most one infinite set) does not apply.
FipResult has_fip(const std::vector<StructuredSet>& family, std::size_t bound = 64);

/// Parses expressions such as "(ap 3 4) ∪ {1,2} ∖ {7}" or "complement(geom 1 2)".
///
///   expr    := term (("∪" | "|" | "∖" | "\") term)*
///   term    := factor (("∩" | "&") factor)*
///   factor  := "(" expr ")" | "{" [int ("," int)*] "}" | "ap" int int
///            | "geom" int int | "from" int | "complement" "(" expr ")"
///            | "N" | "empty"
StructuredSet parse_set_expression(std::string_view text);

}  // namespace momtail
