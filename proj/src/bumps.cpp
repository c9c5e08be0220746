#include <algorithm>

#include "momtail/constructions.hpp"
#include "momtail/errors.hpp"

namespace momtail {

namespace {

Polynomial raw_bump(const Rational& l, const Rational& r, unsigned m) {
  Polynomial q(std::vector<Rational>{Rational(-l * r), Rational(l + r), Rational(-1)});
  return q.pow(m);
}

Integer factorial(unsigned n) {
  Integer f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Polynomial peak_bump(const Rational& l, const Rational& r, unsigned m) {
  if (!(l < r)) throw InputError("bump interval must have positive length");
  if (m < 1) throw InputError("bump degree must be positive");
  Rational half = (r - l) / 2;
  return raw_bump(l, r, m) * (1 / pow(half, 2 * m));
}

Polynomial unit_mass_bump(const Rational& l, const Rational& r, unsigned m) {
  if (!(l < r)) throw InputError("bump interval must have positive length");
  // Integral of ((x-l)(r-x))^m over [l, r] is (r-l)^(2m+1) (m!)^2 / (2m+1)!.
  Integer fm = factorial(m);
  Rational mass = pow(r - l, 2 * m + 1) * Rational(fm * fm) / Rational(factorial(2 * m + 1));
  return raw_bump(l, r, m) * (1 / mass);
}

PiecewisePolyDensity assemble_bumps(const Rational& a, const Rational& b, std::vector<PlacedBump> bumps,
                                    bool is_signed) {
  std::sort(bumps.begin(), bumps.end(), [](const PlacedBump& x, const PlacedBump& y) { return x.lo < y.lo; });
  PiecewisePolyDensity d;
  d.is_signed = is_signed;
  d.breakpoints.push_back(a);
  for (const auto& bump : bumps) {
    if (bump.lo < d.breakpoints.back() || bump.hi > b || !(bump.lo < bump.hi))
      throw InputError("bumps must be disjoint and lie inside [a, b]");
    if (bump.lo > d.breakpoints.back()) {
      d.pieces.emplace_back();
      d.breakpoints.push_back(bump.lo);
    }
    d.pieces.push_back(bump.polynomial);
    d.breakpoints.push_back(bump.hi);
  }
  if (d.breakpoints.back() < b) {
    d.pieces.emplace_back();
    d.breakpoints.push_back(b);
  }
  if (d.pieces.empty()) {
    d.pieces.emplace_back();
    d.breakpoints.push_back(b);
  }
  return d;
}

}  // namespace momtail
