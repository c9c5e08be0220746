#include "momtail/filters.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "momtail/errors.hpp"

namespace momtail {

namespace {

using u64 = std::uint64_t;

bool in_atom(u64 n, const GeometricAtom& a) {
  if (n < a.c || n % a.c != 0) return false;
  u64 q = n / a.c;
  while (q % a.r == 0) q /= a.r;
  return q == 1;
}

u64 lcm_checked(u64 a, u64 b) {
  u64 l = std::lcm(a, b);
  if (l > StructuredSet::kMaxTable) throw SizeBoundExceeded("period of combined set exceeds the table bound");
  return l;
}

}  // namespace

// ---------------------------------------------------------------------------

StructuredSet StructuredSet::empty() {
  StructuredSet s;
  s.table_ = {{false}};
  return s;
}

StructuredSet StructuredSet::naturals() {
  StructuredSet s;
  s.table_ = {{true}};
  return s;
}

StructuredSet StructuredSet::finite(std::vector<u64> elements) {
  StructuredSet s = empty();
  if (elements.empty()) return s;
  u64 top = *std::max_element(elements.begin(), elements.end());
  if (top >= kMaxTable) throw SizeBoundExceeded("finite set element exceeds the explicit-prefix bound");
  s.threshold_ = top + 1;
  s.below_.assign(s.threshold_, false);
  for (u64 e : elements) s.below_[e] = true;
  s.canonicalize();
  return s;
}

StructuredSet StructuredSet::progression(u64 start, u64 step) {
  if (step == 0) return finite({start});
  if (step > kMaxTable || start > kMaxTable) throw SizeBoundExceeded("progression parameters exceed the table bound");
  StructuredSet s;
  s.threshold_ = start;
  s.below_.assign(start, false);
  s.period_ = step;
  s.table_.assign(step, {false});
  s.table_[start % step][0] = true;
  s.canonicalize();
  return s;
}

StructuredSet StructuredSet::geometric(u64 c, u64 r) {
  if (c < 1 || r < 2) throw InputError("geometric set needs c >= 1 and r >= 2");
  StructuredSet s;
  s.atoms_ = {{c, r}};
  s.table_ = {{false, true}};
  return s;
}

unsigned StructuredSet::pattern(u64 n) const {
  unsigned p = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (in_atom(n, atoms_[i])) p |= 1u << i;
  return p;
}

bool StructuredSet::periodic_member(u64 n) const { return table_[n % period_][pattern(n)]; }

bool StructuredSet::contains(u64 n) const { return n < threshold_ ? below_[n] : periodic_member(n); }

void StructuredSet::canonicalize() {
  // Drop atoms the table ignores.
  for (std::size_t i = atoms_.size(); i-- > 0;) {
    const unsigned bit = 1u << i;
    bool relevant = false;
    for (const auto& row : table_)
      for (unsigned p = 0; p < row.size() && !relevant; ++p)
        if (row[p] != row[p ^ bit]) relevant = true;
    if (relevant) continue;
    for (auto& row : table_) {
      std::vector<bool> next(row.size() / 2);
      for (unsigned p = 0; p < next.size(); ++p) {
        unsigned low = p & (bit - 1), high = (p >> i) << (i + 1);
        next[p] = row[high | low];
      }
      row = std::move(next);
    }
    atoms_.erase(atoms_.begin() + static_cast<std::ptrdiff_t>(i));
  }
  // Smallest period.
  for (u64 q = 1; q < period_; ++q) {
    if (period_ % q != 0) continue;
    bool ok = true;
    for (u64 r = q; r < period_ && ok; ++r) ok = table_[r] == table_[r % q];
    if (ok) {
      table_.resize(q);
      period_ = q;
      break;
    }
  }
  // Smallest threshold.
  while (threshold_ > 0 && below_[threshold_ - 1] == periodic_member(threshold_ - 1)) {
    --threshold_;
    below_.pop_back();
  }
}

namespace {

enum class Op { Union, Intersection, Difference };

bool apply(Op op, bool x, bool y) {
  switch (op) {
    case Op::Union:
      return x || y;
    case Op::Intersection:
      return x && y;
    case Op::Difference:
      return x && !y;
  }
  return false;
}

}  // namespace

struct SetAlgebra {
  static StructuredSet combine(const StructuredSet& a, const StructuredSet& b, Op op) {
    StructuredSet s;
    std::vector<GeometricAtom> atoms = a.atoms_;
    atoms.insert(atoms.end(), b.atoms_.begin(), b.atoms_.end());
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    if (atoms.size() > 16) throw SizeBoundExceeded("too many geometric atoms");
    s.atoms_ = atoms;
    s.period_ = lcm_checked(a.period_, b.period_);
    const std::size_t patterns = std::size_t{1} << atoms.size();
    if (patterns * s.period_ > StructuredSet::kMaxTable) throw SizeBoundExceeded("set table exceeds the bound");
    s.threshold_ = std::max(a.threshold_, b.threshold_);

    auto index_map = [&](const StructuredSet& x) {
      std::vector<unsigned> m;
      for (const auto& at : x.atoms_)
        m.push_back(static_cast<unsigned>(std::find(atoms.begin(), atoms.end(), at) - atoms.begin()));
      return m;
    };
    auto ma = index_map(a), mb = index_map(b);
    auto project = [](unsigned pat, const std::vector<unsigned>& m) {
      unsigned out = 0;
      for (std::size_t i = 0; i < m.size(); ++i)
        if (pat >> m[i] & 1u) out |= 1u << i;
      return out;
    };
    s.table_.assign(s.period_, std::vector<bool>(patterns));
    for (u64 r = 0; r < s.period_; ++r)
      for (unsigned p = 0; p < patterns; ++p)
        s.table_[r][p] = apply(op, a.table_[r % a.period_][project(p, ma)], b.table_[r % b.period_][project(p, mb)]);
    s.below_.assign(s.threshold_, false);
    for (u64 n = 0; n < s.threshold_; ++n) s.below_[n] = apply(op, a.contains(n), b.contains(n));
    s.canonicalize();
    return s;
  }
};

StructuredSet operator|(const StructuredSet& a, const StructuredSet& b) { return SetAlgebra::combine(a, b, Op::Union); }
StructuredSet operator&(const StructuredSet& a, const StructuredSet& b) {
  return SetAlgebra::combine(a, b, Op::Intersection);
}
StructuredSet operator-(const StructuredSet& a, const StructuredSet& b) {
  return SetAlgebra::combine(a, b, Op::Difference);
}

StructuredSet StructuredSet::complement() const {
  StructuredSet s = *this;
  s.below_.flip();
  for (auto& row : s.table_) row.flip();
  return s;
}

std::string StructuredSet::describe() const {
  std::ostringstream os;
  os << "threshold " << threshold_ << ", period " << period_;
  if (!atoms_.empty()) {
    os << ", atoms";
    for (const auto& a : atoms_) os << " {" << a.c << "*" << a.r << "^k}";
  }
  std::vector<u64> head;
  for (u64 n = 0; n < threshold_; ++n)
    if (below_[n]) head.push_back(n);
  if (!head.empty()) {
    os << ", below threshold {";
    for (std::size_t i = 0; i < head.size() && i < 20; ++i) os << (i ? "," : "") << head[i];
    if (head.size() > 20) os << ",...";
    os << "}";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Theta analysis.
//
// Elements n >= threshold outside every atom form residue classes; a single
// admissible class makes theta diverge. Otherwise every such element is some
// c r^k, attributed to the lowest-index atom containing it, and along each
// atom the admissibility of c r^k is eventually periodic in k.

namespace {

// Coprime base of a set of integers: every input is a product of powers of
// base elements.
std::vector<Integer> coprime_base(std::vector<Integer> xs) {
  std::vector<Integer> base;
  for (auto& x : xs)
    if (x > 1) base.push_back(x);
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    for (std::size_t i = 0; i < base.size() && !changed; ++i)
      for (std::size_t j = i + 1; j < base.size() && !changed; ++j) {
        Integer g = gcd(base[i], base[j]);
        if (g == 1) continue;
        Integer x = base[i] / g, y = base[j] / g;
        base.erase(base.begin() + static_cast<std::ptrdiff_t>(j));
        base.erase(base.begin() + static_cast<std::ptrdiff_t>(i));
        for (const Integer& v : {g, x, y})
          if (v > 1) base.push_back(v);
        changed = true;
      }
  }
  return base;
}

std::optional<std::vector<long>> valuations(Integer n, const std::vector<Integer>& base) {
  std::vector<long> v(base.size(), 0);
  for (std::size_t i = 0; i < base.size(); ++i)
    while (n % base[i] == 0) {
      n /= base[i];
      ++v[i];
    }
  if (n != 1) return std::nullopt;
  return v;
}

// Membership of c_i r_i^k in atom j, as an eventually periodic predicate of k.
struct AtomRelation {
  long alpha = 0, beta = 0, gamma = 1;
  std::vector<std::pair<long, long>> others;  // (A, B): need A k == B
  bool never = false;

  bool at(u64 k) const {
    if (never) return false;
    long num = alpha + beta * static_cast<long>(k);
    if (num < 0 || num % gamma != 0) return false;
    for (const auto& [A, B] : others)
      if (A * static_cast<long>(k) != B) return false;
    return true;
  }
  u64 settles() const {
    u64 t = 0;
    if (beta > 0 && alpha < 0) t = static_cast<u64>((-alpha + beta - 1) / beta);
    for (const auto& [A, B] : others)
      if (A != 0 && B % A == 0 && B / A >= 0) t = std::max(t, static_cast<u64>(B / A) + 1);
    return t;
  }
  u64 period() const { return beta == 0 ? 1 : static_cast<u64>(gamma / std::gcd(std::abs(beta), gamma)); }
};

AtomRelation relate(const GeometricAtom& i, const GeometricAtom& j) {
  std::vector<Integer> nums{Integer(std::to_string(i.c)), Integer(std::to_string(i.r)),
                            Integer(std::to_string(j.c)), Integer(std::to_string(j.r))};
  std::vector<Integer> base = coprime_base(nums);
  std::vector<std::vector<long>> v;
  for (;;) {
    v.clear();
    bool ok = true;
    for (const auto& x : nums) {
      auto val = valuations(x, base);
      if (!val) {
        ok = false;
        break;
      }
      v.push_back(*val);
    }
    if (ok) break;
    // Refine with the leftover cofactors and retry.
    std::vector<Integer> more = base;
    for (auto x : nums) {
      for (const auto& b : base)
        while (x % b == 0) x /= b;
      more.push_back(x);
    }
    base = coprime_base(more);
  }
  const auto &ci = v[0], &ri = v[1], &cj = v[2], &rj = v[3];
  AtomRelation rel;
  std::size_t p = 0;
  while (p < base.size() && rj[p] == 0) ++p;
  rel.alpha = ci[p] - cj[p];
  rel.beta = ri[p];
  rel.gamma = rj[p];
  for (std::size_t q = 0; q < base.size(); ++q) {
    if (q == p) continue;
    // gamma (ci - cj) + k gamma ri = (alpha + beta k) rj
    long A = rel.gamma * ri[q] - rel.beta * rj[q];
    long B = rel.alpha * rj[q] - rel.gamma * (ci[q] - cj[q]);
    if (A == 0) {
      if (B != 0) rel.never = true;
      continue;
    }
    rel.others.emplace_back(A, B);
  }
  return rel;
}

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m); }

struct AtomSum {
  Rational head;          // contributions before the periodic part
  Rational cycle;         // contributions of the periodic part, summed in closed form
  bool cycle_hits = false;
  std::optional<Integer> first;  // smallest contributing element
};

AtomSum atom_sum(const std::vector<GeometricAtom>& atoms, std::size_t i, u64 threshold, u64 period,
                 const std::vector<std::vector<bool>>& table) {
  const GeometricAtom& at = atoms[i];
  std::vector<AtomRelation> rel(atoms.size());
  u64 start = 0, per = 1;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (j == i) continue;
    rel[j] = relate(at, atoms[j]);
    start = std::max(start, rel[j].settles());
    per = std::lcm(per, rel[j].period());
  }
  // Residues c r^k mod period: pre-period mu, cycle lambda.
  std::map<u64, u64> seen;
  u64 v = at.c % period, mu = 0, lambda = 1;
  for (u64 k = 0;; ++k) {
    auto [it, fresh] = seen.emplace(v, k);
    if (!fresh) {
      mu = it->second;
      lambda = k - it->second;
      break;
    }
    v = mulmod(v, at.r % period, period);
  }
  start = std::max(start, mu);
  per = std::lcm(per, lambda);
  // First k with c r^k >= threshold.
  Integer c(std::to_string(at.c)), r(std::to_string(at.r)), thr(std::to_string(threshold));
  u64 k_first = 0;
  Integer elem = c;
  while (elem < thr) {
    elem *= r;
    ++k_first;
  }
  start = std::max(start, k_first);

  u64 residue = at.c % period;
  auto residue_at = [&](u64 k) {
    u64 out = residue, base = at.r % period, e = k;
    while (e) {
      if (e & 1) out = mulmod(out, base, period);
      base = mulmod(base, base, period);
      e >>= 1;
    }
    return out;
  };
  auto indicator = [&](u64 k) {
    unsigned pat = 1u << i;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (j == i || !rel[j].at(k)) continue;
      if (j < i) return false;  // counted under atom j
      pat |= 1u << j;
    }
    return bool(table[residue_at(k)][pat]);
  };

  AtomSum out;
  Integer power;
  mpz_pow_ui(power.get_mpz_t(), r.get_mpz_t(), k_first);
  Integer n = c * power;
  for (u64 k = k_first; k < start; ++k, n *= r)
    if (indicator(k)) {
      out.head += Rational(1) / Rational(n);
      if (!out.first) out.first = n;
    }
  Rational rp = pow(Rational(r), per);
  Rational factor = rp / (rp - 1);  // 1 / (1 - r^-per)
  for (u64 k = start; k < start + per; ++k, n *= r)
    if (indicator(k)) {
      out.cycle_hits = true;
      out.cycle += factor / Rational(n);
      if (!out.first) out.first = n;
    }
  return out;
}

}  // namespace

struct ThetaAnalysis {
  ThetaResult result;
  bool finite = true;
  bool nonempty = false;
  std::optional<u64> element;

  explicit ThetaAnalysis(const StructuredSet& s) {
    for (u64 n = 0; n < s.threshold_; ++n)
      if (s.below_[n]) {
        nonempty = true;
        if (!element) element = n;
        if (n >= 1) result.value += Rational(1, n);
      }
    for (u64 r = 0; r < s.period_; ++r) {
      if (!s.table_[r][0]) continue;
      result.diverges = true;
      result.residue = r;
      result.modulus = s.period_;
      result.from = s.threshold_;
      finite = false;
      nonempty = true;
      if (!element) {
        u64 n = s.threshold_ + (r + s.period_ - s.threshold_ % s.period_) % s.period_;
        while (!s.contains(n)) n += s.period_;
        element = n;
      }
      break;
    }
    if (result.diverges) {
      result.value = 0;
      return;
    }
    for (std::size_t i = 0; i < s.atoms_.size(); ++i) {
      AtomSum a = atom_sum(s.atoms_, i, s.threshold_, s.period_, s.table_);
      result.value += a.head + a.cycle;
      if (a.cycle_hits) finite = false;
      if (a.first) {
        nonempty = true;
        if (!element && a.first->fits_ulong_p()) element = a.first->get_ui();
      }
    }
  }
};

ThetaResult theta(const StructuredSet& s) { return ThetaAnalysis(s).result; }

bool StructuredSet::is_empty() const { return !ThetaAnalysis(*this).nonempty; }
bool StructuredSet::is_finite() const { return ThetaAnalysis(*this).finite; }
std::optional<u64> StructuredSet::some_element() const { return ThetaAnalysis(*this).element; }

std::vector<u64> StructuredSet::elements_below(u64 limit) const {
  std::vector<u64> out;
  for (u64 n = 0; n < limit; ++n)
    if (contains(n)) out.push_back(n);
  return out;
}

bool in_frechet(const StructuredSet& s) { return s.complement().is_finite(); }
bool in_msz_filter(const StructuredSet& s) { return !theta(s.complement()).diverges; }

// ---------------------------------------------------------------------------

MszVerdict is_msz_sequence(const StructuredSet& s) {
  MszVerdict v;
  ThetaResult t = theta(s);
  if (t.diverges) {
    v.kind = MszVerdict::Kind::Certified;
    v.detail = "contains the residue class " + std::to_string(t.residue) + " mod " + std::to_string(t.modulus) +
               " from " + std::to_string(t.from) + " up to sparse exceptions";
  } else {
    v.kind = MszVerdict::Kind::NotMSz;
    v.partial_sum = t.value;
    v.detail = "reciprocal sum converges to " + to_string(t.value);
  }
  return v;
}

MszVerdict is_msz_sequence(const std::vector<u64>& prefix, const std::vector<std::pair<u64, u64>>& runs) {
  for (std::size_t i = 1; i < prefix.size(); ++i)
    if (!(prefix[i - 1] < prefix[i])) throw InputError("sequence must be strictly increasing");
  MszVerdict v;
  for (u64 n : prefix)
    if (n >= 1) v.partial_sum += Rational(1, n);
  if (runs.empty()) {
    v.kind = MszVerdict::Kind::UndecidedPrefix;
    v.detail = "a finite prefix cannot decide divergence; partial sum " + to_string(v.partial_sum);
    return v;
  }
  auto sorted = runs;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    auto [lo, hi] = sorted[i];
    auto fail = [&](const std::string& why) {
      v.kind = MszVerdict::Kind::UndecidedPrefix;
      v.detail = "run [" + std::to_string(lo) + ", " + std::to_string(hi) + "] rejected: " + why;
      return v;
    };
    if (lo < 1 || hi < lo) return fail("empty or contains 0");
    if (i > 0 && sorted[i - 1].second >= lo) return fail("overlaps the previous run");
    auto first = std::lower_bound(prefix.begin(), prefix.end(), lo);
    if (first == prefix.end() || *first != lo || static_cast<u64>(prefix.end() - first) < hi - lo + 1 ||
        *(first + static_cast<std::ptrdiff_t>(hi - lo)) != hi)
      return fail("not contained in the sequence");
    Rational sum = 0;
    for (u64 n = lo; n <= hi; ++n) sum += Rational(1, n);
    if (sum < Rational(1, 2)) return fail("reciprocal sum " + to_string(sum) + " is below 1/2");
  }
  v.kind = MszVerdict::Kind::Certified;
  v.runs = sorted.size();
  v.detail = std::to_string(sorted.size()) + " disjoint runs, each contributing at least 1/2";
  return v;
}

FipResult has_fip(const std::vector<StructuredSet>& family, std::size_t bound) {
  FipResult out;
  std::vector<std::size_t> other;
  for (std::size_t i = 0; i < family.size(); ++i)
    if (!in_frechet(family[i])) other.push_back(i);
  if (other.empty() || (other.size() == 1 && !family[other[0]].is_finite())) {
    out.holds = true;
    out.fast_path = true;
    return out;
  }
  if (family.size() > bound) throw SizeBoundExceeded("family exceeds the FIP size bound");

  StructuredSet all = StructuredSet::naturals();
  for (const auto& s : family) all = all & s;
  if (!all.is_empty()) {
    out.holds = true;
    return out;
  }
  // Greedy minimization of an empty subfamily.
  std::vector<std::size_t> keep(family.size());
  std::iota(keep.begin(), keep.end(), 0);
  for (std::size_t i = family.size(); i-- > 0;) {
    std::vector<std::size_t> trial;
    for (std::size_t k : keep)
      if (k != i) trial.push_back(k);
    StructuredSet inter = StructuredSet::naturals();
    for (std::size_t k : trial) inter = inter & family[k];
    if (inter.is_empty()) keep = std::move(trial);
  }
  out.witness = keep;
  return out;
}

}  // namespace momtail
