#include <algorithm>

#include "momtail/errors.hpp"
#include "momtail/polynomial.hpp"

namespace momtail {

SturmSequence::SturmSequence(const Polynomial& p) {
  if (p.is_zero()) throw InputError("Sturm sequence of the zero polynomial");
  chain_.push_back(p.squarefree_part());
  if (chain_.front().degree() <= 0) return;
  chain_.push_back(chain_.front().derivative());
  while (true) {
    Polynomial r = -Polynomial::divmod(chain_[chain_.size() - 2], chain_.back()).second;
    if (r.is_zero()) break;
    chain_.push_back(std::move(r));
  }
}

int SturmSequence::variations(const Rational& x) const {
  int changes = 0;
  int last = 0;
  for (const auto& s : chain_) {
    int v = sgn(s(x));
    if (v == 0) continue;
    if (last != 0 && v != last) ++changes;
    last = v;
  }
  return changes;
}

int SturmSequence::count_roots(const Rational& lo, const Rational& hi) const {
  if (!(lo < hi)) return 0;
  return variations(lo) - variations(hi);
}

namespace {

struct Pending {
  Rational lo, hi;
  int count;
};

}  // namespace

std::vector<RootInterval> isolate_roots(const Polynomial& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero()) throw InputError("cannot isolate roots of the zero polynomial");
  std::vector<RootInterval> out;
  if (p.degree() <= 0 || !(lo < hi)) return out;
  SturmSequence sturm(p);
  const Polynomial& q = sturm.squarefree();

  std::vector<Pending> stack;
  stack.push_back({lo, hi, sturm.count_roots(lo, hi)});
  while (!stack.empty()) {
    Pending cur = std::move(stack.back());
    stack.pop_back();
    if (cur.count == 0) continue;
    if (cur.count == 1) {
      if (q(cur.hi) == 0) {
        if (cur.hi != hi) out.push_back({cur.hi, cur.hi});
      } else {
        out.push_back({cur.lo, cur.hi});
      }
      continue;
    }
    Rational mid = (cur.lo + cur.hi) / 2;
    int left = sturm.count_roots(cur.lo, mid);
    // Push right first so the left half is processed first.
    stack.push_back({mid, cur.hi, cur.count - left});
    stack.push_back({cur.lo, mid, left});
  }
  std::sort(out.begin(), out.end(), [](const RootInterval& a, const RootInterval& b) { return a.lo < b.lo; });
  return out;
}

void refine_root(const SturmSequence& sturm, RootInterval& root, const Rational& width) {
  const Polynomial& q = sturm.squarefree();
  while (!root.is_exact() && root.hi - root.lo > width) {
    Rational mid = (root.lo + root.hi) / 2;
    if (q(mid) == 0) {
      root.lo = root.hi = mid;
      return;
    }
    if (sturm.count_roots(root.lo, mid) == 1)
      root.hi = mid;
    else
      root.lo = mid;
  }
}

namespace {

void halve(const SturmSequence& sturm, RootInterval& root) {
  Rational w = (root.hi - root.lo) / 2;
  refine_root(sturm, root, w);
}

}  // namespace

std::vector<Rational> sign_sample_points(const Polynomial& p, const Rational& lo, const Rational& hi) {
  std::vector<Rational> points;
  if (!(lo < hi)) return points;
  if (p.degree() <= 0) {
    points.push_back((lo + hi) / 2);
    return points;
  }
  std::vector<RootInterval> roots = isolate_roots(p, lo, hi);
  SturmSequence sturm(p);

  // Gap g lies between boundary g-1 and boundary g, where boundary -1 is lo
  // and boundary roots.size() is hi.
  for (std::size_t g = 0; g <= roots.size(); ++g) {
    RootInterval* left = g == 0 ? nullptr : &roots[g - 1];
    RootInterval* right = g == roots.size() ? nullptr : &roots[g];
    while (true) {
      Rational a = left ? left->hi : lo;
      Rational b = right ? right->lo : hi;
      if (a < b) {
        points.push_back((a + b) / 2);
        break;
      }
      // a == b: usable only if it is strictly past the left root and before the right root.
      bool left_ok = left && !left->is_exact();
      bool right_ok = right && !right->is_exact();
      if (left_ok && right_ok) {
        points.push_back(a);
        break;
      }
      if (left && !left->is_exact()) halve(sturm, *left);
      if (right && !right->is_exact()) halve(sturm, *right);
    }
  }
  return points;
}

namespace {

// Bernstein coefficients of p on [lo, hi]. All of them nonnegative proves
// p >= 0 there; the first and last are p(lo) and p(hi).
std::vector<Rational> bernstein_coefficients(const Polynomial& p, const Rational& lo, const Rational& hi) {
  Polynomial q = p.shifted(lo);
  const std::size_t n = static_cast<std::size_t>(std::max(p.degree(), 0));
  std::vector<Rational> a(n + 1);
  Rational wp = 1;
  for (std::size_t i = 0; i <= n; ++i, wp *= hi - lo) a[i] = q.coefficient(i) * wp;
  // b_j = sum_{i <= j} C(j, i) / C(n, i) a_i
  std::vector<Integer> binom_n(n + 1);
  for (std::size_t i = 0; i <= n; ++i) mpz_bin_uiui(binom_n[i].get_mpz_t(), n, i);
  std::vector<Rational> b(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    Integer cji = 1;
    for (std::size_t i = 0; i <= j; ++i) {
      b[j] += Rational(cji) / Rational(binom_n[i]) * a[i];
      cji = cji * Integer(static_cast<unsigned long>(j - i)) / Integer(static_cast<unsigned long>(i + 1));
    }
  }
  return b;
}

// True when subdivided Bernstein coefficients prove p >= 0 on [lo, hi].
bool bernstein_certifies_nonnegative(const Polynomial& p, const Rational& lo, const Rational& hi, int depth) {
  auto b = bernstein_coefficients(p, lo, hi);
  if (std::all_of(b.begin(), b.end(), [](const Rational& x) { return x >= 0; })) return true;
  if (depth == 0 || b.front() < 0 || b.back() < 0) return false;
  Rational mid = (lo + hi) / 2;
  return bernstein_certifies_nonnegative(p, lo, mid, depth - 1) &&
         bernstein_certifies_nonnegative(p, mid, hi, depth - 1);
}

}  // namespace

std::optional<Rational> find_negative_point(const Polynomial& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero()) return std::nullopt;
  if (p(lo) < 0) return lo;
  if (p(hi) < 0) return hi;
  if (bernstein_certifies_nonnegative(p, lo, hi, 4)) return std::nullopt;
  for (const auto& x : sign_sample_points(p, lo, hi))
    if (p(x) < 0) return x;
  return std::nullopt;
}

bool nonnegative_on(const Polynomial& p, const Rational& lo, const Rational& hi) {
  return !find_negative_point(p, lo, hi).has_value();
}

int count_sign_changes(const Polynomial& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero()) return 0;
  int changes = 0;
  int last = 0;
  for (const auto& x : sign_sample_points(p, lo, hi)) {
    int s = sgn(p(x));
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

Rational abs_upper_bound_on(const Polynomial& p, const Rational& lo, const Rational& hi) {
  Polynomial q = p.shifted(lo);
  Rational w = hi - lo;
  Rational bound = 0;
  Rational wp = 1;
  for (const auto& c : q.coefficients()) {
    bound += abs_value(c) * wp;
    wp *= w;
  }
  return bound;
}

Rational lower_bound_on(const Polynomial& p, const Rational& lo, const Rational& hi) {
  Rational best = std::min(p(lo), p(hi));
  Polynomial dp = p.derivative();
  if (dp.degree() <= 0) return best;
  SturmSequence sturm(dp);
  Rational width = (hi - lo) / (Integer(1) << 24);
  for (auto root : isolate_roots(dp, lo, hi)) {
    if (root.is_exact()) {
      best = std::min(best, p(root.lo));
      continue;
    }
    refine_root(sturm, root, width);
    if (root.is_exact()) {
      best = std::min(best, p(root.lo));
      continue;
    }
    Rational slope = abs_upper_bound_on(dp, root.lo, root.hi);
    best = std::min(best, Rational(std::min(p(root.lo), p(root.hi)) - slope * (root.hi - root.lo)));
  }
  return best;
}

}  // namespace momtail
