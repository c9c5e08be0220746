#include "momtail/tailorder.hpp"

#include <algorithm>
#include <set>

#include "momtail/cdf.hpp"
#include "momtail/errors.hpp"
#include "momtail/moment_sweep.hpp"

namespace momtail {

std::vector<int> moment_difference_signs(const Measure& mu1, const Measure& mu2, unsigned long K,
                                         const PrecisionBudget& budget) {
  std::vector<int> signs;
  signs.reserve(K + 1);
  auto d1 = std::get_if<PiecewisePolyDensity>(&mu1);
  auto d2 = std::get_if<PiecewisePolyDensity>(&mu2);
  if (d1 && d2) {
    MomentSweep sweep(combine(-1, *d1, 1, *d2));
    for (unsigned long k = 0; k <= K; ++k) {
      if (k > 0) sweep.advance();
      budget.check(sweep.numerator(), "moment difference");
      signs.push_back(sweep.sign());
    }
    return signs;
  }
  auto t1 = moment_table(mu1, K, budget);
  auto t2 = moment_table(mu2, K, budget);
  for (unsigned long k = 0; k <= K; ++k) {
    Rational diff = t2[k].value - t1[k].value;
    Rational radius = t1[k].error_radius + t2[k].error_radius;
    if (diff - radius > 0)
      signs.push_back(1);
    else if (diff + radius < 0)
      signs.push_back(-1);
    else if (radius == 0)
      signs.push_back(0);
    else
      signs.push_back(kIndeterminate);
  }
  return signs;
}

namespace {

// Witness from the first index of every maximal constant-sign run.
std::vector<std::pair<unsigned long, int>> run_starts(const std::vector<int>& signs) {
  std::vector<std::pair<unsigned long, int>> out;
  for (unsigned long k = 0; k < signs.size(); ++k) {
    int s = signs[k];
    if (s != 1 && s != -1) continue;
    if (out.empty() || out.back().second != s) out.emplace_back(k, s);
  }
  return out;
}

std::optional<std::vector<std::pair<unsigned long, int>>> focus_witness(const std::vector<int>& signs,
                                                                         const std::vector<unsigned long>& focus) {
  std::vector<std::pair<unsigned long, int>> out;
  for (unsigned long k : focus) {
    if (k >= signs.size()) return std::nullopt;
    int s = signs[k];
    if (s != 1 && s != -1) return std::nullopt;
    if (!out.empty() && (out.back().first >= k || out.back().second == s)) return std::nullopt;
    out.emplace_back(k, s);
  }
  return out;
}

}  // namespace

TailVerdict compare_empirical(const Measure& mu1, const Measure& mu2, const CompareOptions& options,
                              const PrecisionBudget& budget) {
  const unsigned long K = options.depth;
  std::vector<int> signs = moment_difference_signs(mu1, mu2, K, budget);
  TailVerdict v;
  v.evidence = Evidence::Heuristic;

  auto runs = run_starts(signs);
  if (runs.size() >= 5) {
    AlternationWitness w;
    if (!options.focus.empty()) {
      if (auto f = focus_witness(signs, options.focus); f && f->size() >= 2) w.indices = *f;
    }
    if (w.indices.empty()) w.indices = runs;
    v.outcome = w;
    v.detail = std::to_string(runs.size() - 1) + " sign changes up to depth " + std::to_string(K);
    return v;
  }

  int last = signs[K];
  if (last == kIndeterminate) {
    v.outcome = Undetermined{K};
    v.detail = "moment intervals do not resolve the sign at depth " + std::to_string(K);
    return v;
  }
  unsigned long n0 = K;
  while (n0 > 0 && signs[n0 - 1] == last) --n0;
  if (last == 0) {
    v.outcome = EqualPrefix{n0};
    v.detail = "moments agree from index " + std::to_string(n0) + " through " + std::to_string(K);
    return v;
  }
  MomentPrefix cert{n0, K};
  if (last > 0)
    v.outcome = StrictlyBelow{cert};
  else
    v.outcome = StrictlyAbove{cert};
  v.detail = "constant sign on the prefix [" + std::to_string(n0) + ", " + std::to_string(K) + "]";
  return v;
}

TailVerdict decide_piecewise(const PiecewisePolyDensity& d1, const PiecewisePolyDensity& d2) {
  if (d1.is_signed || d2.is_signed) throw InputError("decide_piecewise requires unsigned densities");
  validate(d1);
  validate(d2);
  PiecewisePolyDensity diff = combine(-1, d1, 1, d2);
  TailVerdict v;
  v.evidence = Evidence::Proved;

  std::size_t i = diff.pieces.size();
  while (i > 0 && diff.pieces[i - 1].is_zero()) --i;
  if (i == 0) {
    v.outcome = EqualPrefix{0};
    v.detail = "densities coincide";
    return v;
  }
  --i;
  const Polynomial& p = diff.pieces[i];
  const Rational& l = diff.breakpoints[i];
  const Rational& r = diff.breakpoints[i + 1];

  Rational lo = l;
  if (p.degree() > 0) {
    auto roots = isolate_roots(p, l, r);
    if (!roots.empty()) {
      RootInterval last = roots.back();
      refine_root(SturmSequence(p), last, (r - l) / (Integer(1) << 20));
      lo = last.hi;
    }
  }
  int s = sign(p((lo + r) / 2));
  RightmostDifference cert{lo, r, s};
  if (s > 0)
    v.outcome = StrictlyBelow{cert};
  else
    v.outcome = StrictlyAbove{cert};
  v.detail = "difference d2 - d1 has sign " + std::string(s > 0 ? "+" : "-") + " on (" + to_string(lo) + ", " +
             to_string(r) + "] and vanishes to the right";
  return v;
}

namespace {

CertifyResult cdf_exact(const Measure& mu1, const Measure& mu2, const Rational& x0) {
  CertifyResult out;
  PiecewiseCdf F1 = exact_cdf(mu1), F2 = exact_cdf(mu2);
  Rational b = std::max(support_bounds(mu1).second, support_bounds(mu2).second);
  if (x0 > b) throw InputError("x0 lies right of both supports");

  Rational at_x0 = F1(x0) - F2(x0);
  if (at_x0 <= 0) {
    out.witness = x0;
    out.detail = "F1(x0) - F2(x0) = " + to_string(at_x0) + " is not positive";
    return out;
  }
  std::set<Rational> cuts{x0, b};
  for (const auto& k : F1.knots)
    if (k > x0 && k < b) cuts.insert(k);
  for (const auto& k : F2.knots)
    if (k > x0 && k < b) cuts.insert(k);
  std::vector<Rational> pts(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    Polynomial d = F1.segment_at(pts[i]) - F2.segment_at(pts[i]);
    if (auto x = find_negative_point(d, pts[i], pts[i + 1])) {
      // The closed check also sees the left limit at pts[i+1]; any negative
      // left limit forces negative values just left of it.
      Rational where = *x;
      if (where == pts[i + 1]) {
        where = pts[i + 1];
        Rational step = (pts[i + 1] - pts[i]) / 2;
        while (d(where) >= 0 || where >= pts[i + 1]) {
          where = pts[i + 1] - step;
          step /= 2;
        }
      }
      out.witness = where;
      out.detail = "F1 - F2 is negative at x = " + to_string(where);
      return out;
    }
  }
  if (F1(b) - F2(b) < 0) {
    out.witness = b;
    out.detail = "F1 - F2 is negative at x = " + to_string(b);
    return out;
  }
  out.certified = true;
  out.verdict.outcome = StrictlyBelow{CdfDominance{x0}};
  out.verdict.evidence = Evidence::Proved;
  out.verdict.detail = "F1 >= F2 on [x0, b], strict at x0";
  return out;
}

// Candidate points where either interval CDF can change: atoms of the
// truncated parts and the start of every rule's unresolved tail region.
void collect_points(const Measure& mu, const Rational& x0, std::set<Rational>& pts) {
  if (auto f = std::get_if<DiscreteFinite>(&mu)) {
    for (const auto& a : f->atoms)
      if (a.location >= x0) pts.insert(a.location);
    return;
  }
  const auto& r = std::get<DiscreteRule>(mu);
  for (const auto& a : r.truncated().atoms)
    if (a.location >= x0) pts.insert(a.location);
  Rational tail_start = r.location.at(r.truncation + 1);
  if (tail_start >= x0) pts.insert(tail_start);
}

CertifyResult cdf_interval(const Measure& mu1, const Measure& mu2, const Rational& x0) {
  CertifyResult out;
  if (std::holds_alternative<PiecewisePolyDensity>(mu1) || std::holds_alternative<PiecewisePolyDensity>(mu2)) {
    out.verdict.outcome = Undetermined{0};
    out.detail = "interval CDF check does not support mixing densities with rule-based measures";
    return out;
  }
  std::set<Rational> pts{x0};
  collect_points(mu1, x0, pts);
  collect_points(mu2, x0, pts);
  bool resolved = true;
  for (const auto& x : pts) {
    MomentValue a = cdf(mu1, x), c = cdf(mu2, x);
    Rational lo = a.lower() - c.upper();
    Rational hi = a.upper() - c.lower();
    bool need_strict = x == x0;
    if (hi < 0 || (need_strict && hi <= 0)) {
      out.witness = x;
      out.detail = "F1 - F2 is " + std::string(hi < 0 ? "negative" : "not positive") + " at x = " + to_string(x);
      return out;
    }
    if (lo < 0 || (need_strict && lo <= 0)) resolved = false;
  }
  if (!resolved) {
    out.verdict.outcome = Undetermined{0};
    out.detail = "truncation intervals do not separate the CDFs";
    return out;
  }
  out.certified = true;
  out.verdict.outcome = StrictlyBelow{CdfDominance{x0}};
  out.verdict.evidence = Evidence::Proved;
  out.verdict.detail = "F1 >= F2 on [x0, b] within truncation intervals, strict at x0";
  return out;
}

}  // namespace

CertifyResult certify_cdf_dominance(const Measure& mu1, const Measure& mu2, const Rational& x0) {
  if (is_signed(mu1) || is_signed(mu2)) throw InputError("CDF dominance requires unsigned measures");
  validate(mu1);
  validate(mu2);
  MomentValue m1 = total_mass(mu1), m2 = total_mass(mu2);
  auto overlaps_one = [](const MomentValue& m) { return m.lower() <= 1 && m.upper() >= 1; };
  if (!overlaps_one(m1) || !overlaps_one(m2)) throw InputError("CDF dominance requires probability measures");

  bool exact = !std::holds_alternative<DiscreteRule>(mu1) && !std::holds_alternative<DiscreteRule>(mu2);
  CertifyResult out = exact ? cdf_exact(mu1, mu2, x0) : cdf_interval(mu1, mu2, x0);
  if (!out.certified && out.witness) {
    out.verdict.outcome = Undetermined{0};
    out.verdict.detail = out.detail;
  }
  return out;
}

PositivityCertificate certify_eventual_positive(const PiecewisePolyDensity& f, const Rational& x0, unsigned long cap) {
  PositivityCertificate out;
  if (x0 < f.lower() || x0 > f.upper()) throw InputError("x0 must lie in the support interval");
  Rational v0 = f.value_at(x0);
  if (v0 <= 0) {
    out.witness = x0;
    out.detail = "f(x0) = " + to_string(v0) + " is not positive";
    return out;
  }
  for (std::size_t i = 0; i < f.pieces.size(); ++i) {
    const Rational& r = f.breakpoints[i + 1];
    if (r <= x0) continue;
    Rational l = std::max(f.breakpoints[i], x0);
    if (auto x = find_negative_point(f.pieces[i], l, r)) {
      out.witness = *x;
      out.detail = "f is negative at x = " + to_string(*x);
      return out;
    }
  }
  MomentSweep sweep(f);
  for (unsigned long k = 0; k <= cap; ++k) {
    if (k > 0) sweep.advance();
    if (sweep.sign() > 0) {
      out.certified = true;
      out.n0 = k;
      out.detail = "hypotheses hold; first positive moment at k = " + std::to_string(k);
      return out;
    }
  }
  out.detail = "hypotheses hold but no positive moment up to k = " + std::to_string(cap);
  return out;
}

CertifyResult certify_density_dominance(const PiecewisePolyDensity& d1, const PiecewisePolyDensity& d2,
                                        const Rational& x0, unsigned long cap) {
  CertifyResult out;
  PositivityCertificate p = certify_eventual_positive(combine(-1, d1, 1, d2), x0, cap);
  out.witness = p.witness;
  out.detail = p.detail;
  if (!p.certified) {
    out.verdict.outcome = Undetermined{cap};
    out.verdict.detail = p.detail;
    return out;
  }
  out.certified = true;
  out.verdict.outcome = StrictlyBelow{DensityDominance{x0}};
  out.verdict.evidence = Evidence::Proved;
  out.verdict.detail = p.detail;
  return out;
}

}  // namespace momtail
