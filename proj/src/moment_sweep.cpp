#include "momtail/moment_sweep.hpp"

#include <algorithm>

namespace momtail {

MomentSweep::MomentSweep(const PiecewisePolyDensity& d, unsigned long start) : k_(start) {
  common_den_ = 1;
  for (const auto& x : d.breakpoints) mpz_lcm(common_den_.get_mpz_t(), common_den_.get_mpz_t(), x.get_den_mpz_t());

  const std::size_t m = d.pieces.size();
  std::vector<std::vector<Rational>> jumps(m + 1);
  jump_den_ = 1;
  for (std::size_t b = 0; b <= m; ++b) {
    const std::vector<Rational> empty;
    const auto& left = b == 0 ? empty : d.pieces[b - 1].coefficients();
    const auto& right = b == m ? empty : d.pieces[b].coefficients();
    std::size_t n = std::max(left.size(), right.size());
    std::vector<Rational> delta(n);
    for (std::size_t j = 0; j < n; ++j) {
      Rational l = j < left.size() ? left[j] : Rational(0);
      Rational r = j < right.size() ? right[j] : Rational(0);
      delta[j] = l - r;
      mpz_lcm(jump_den_.get_mpz_t(), jump_den_.get_mpz_t(), delta[j].get_den_mpz_t());
    }
    while (!delta.empty() && delta.back() == 0) delta.pop_back();
    slots_ = std::max(slots_, delta.size());
    jumps[b] = std::move(delta);
  }

  for (std::size_t b = 0; b <= m; ++b) {
    if (jumps[b].empty()) continue;
    Knot knot;
    Rational scaled = d.breakpoints[b] * Rational(common_den_);
    knot.u = scaled.get_num();
    knot.weights.resize(slots_);
    Integer u_pow = 1;
    for (std::size_t j = 0; j < slots_; ++j) {
      if (j < jumps[b].size() && jumps[b][j] != 0) {
        Rational n = jumps[b][j] * Rational(jump_den_);
        Integer d_pow;
        mpz_pow_ui(d_pow.get_mpz_t(), common_den_.get_mpz_t(), slots_ - 1 - j);
        knot.weights[j] = n.get_num() * u_pow * d_pow;
      }
      u_pow *= knot.u;
    }
    knots_.push_back(std::move(knot));
  }
  reset_powers();
  evaluate();
}

void MomentSweep::reset_powers() {
  for (auto& knot : knots_) mpz_pow_ui(knot.power.get_mpz_t(), knot.u.get_mpz_t(), k_ + 1);
  mpz_pow_ui(den_power_.get_mpz_t(), common_den_.get_mpz_t(), k_ + slots_);
}

void MomentSweep::evaluate() {
  if (knots_.empty()) {
    num_ = 0;
    den_ = 1;
    return;
  }
  // P_j = prod_{i != j} (k + i + 1), and the full product.
  std::vector<Integer> prefix(slots_ + 1), suffix(slots_ + 1);
  prefix[0] = 1;
  for (std::size_t i = 0; i < slots_; ++i) prefix[i + 1] = prefix[i] * static_cast<unsigned long>(k_ + i + 1);
  suffix[slots_] = 1;
  for (std::size_t i = slots_; i-- > 0;) suffix[i] = suffix[i + 1] * static_cast<unsigned long>(k_ + i + 1);

  num_ = 0;
  Integer coef;
  for (const auto& knot : knots_) {
    coef = 0;
    for (std::size_t j = 0; j < slots_; ++j)
      if (knot.weights[j] != 0) coef += knot.weights[j] * prefix[j] * suffix[j + 1];
    num_ += coef * knot.power;
  }
  den_ = jump_den_ * den_power_ * prefix[slots_];
}

Rational MomentSweep::value() const {
  Rational q(num_, den_);
  q.canonicalize();
  return q;
}

void MomentSweep::advance() {
  ++k_;
  for (auto& knot : knots_) knot.power *= knot.u;
  den_power_ *= common_den_;
  evaluate();
}

void MomentSweep::seek(unsigned long k) {
  if (k < k_ || k - k_ > 32) {
    k_ = k;
    reset_powers();
    evaluate();
    return;
  }
  while (k_ < k) advance();
}

int compare_magnitude(const MomentSweep& a, const MomentSweep& b) {
  Integer lhs = abs(a.numerator()) * b.denominator();
  Integer rhs = abs(b.numerator()) * a.denominator();
  return cmp(lhs, rhs) < 0 ? -1 : (cmp(lhs, rhs) > 0 ? 1 : 0);
}

}  // namespace momtail
