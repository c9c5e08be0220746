#include "momtail/cdf.hpp"

#include <algorithm>
#include <map>

#include "momtail/errors.hpp"

namespace momtail {

Polynomial PiecewiseCdf::segment_at(const Rational& x) const {
  if (knots.empty() || x < knots.front()) return {};
  auto it = std::upper_bound(knots.begin(), knots.end(), x);
  return segments[static_cast<std::size_t>(it - knots.begin()) - 1];
}

Rational PiecewiseCdf::operator()(const Rational& x) const { return segment_at(x)(x); }

PiecewiseCdf exact_cdf(const Measure& mu) {
  PiecewiseCdf out;
  if (auto d = std::get_if<PiecewisePolyDensity>(&mu)) {
    if (d->is_signed) throw InputError("cdf requires an unsigned measure");
    Rational below = 0;
    for (std::size_t i = 0; i < d->pieces.size(); ++i) {
      Polynomial anti = d->pieces[i].antiderivative();
      const Rational& lo = d->breakpoints[i];
      out.knots.push_back(lo);
      out.segments.push_back(anti + Polynomial::constant(below - anti(lo)));
      below += anti(d->breakpoints[i + 1]) - anti(lo);
    }
    out.knots.push_back(d->upper());
    out.segments.push_back(Polynomial::constant(below));
    return out;
  }
  if (auto f = std::get_if<DiscreteFinite>(&mu)) {
    std::map<Rational, Rational> mass;
    for (const auto& a : f->atoms) mass[a.location] += a.mass;
    Rational running = 0;
    for (const auto& [x, m] : mass) {
      running += m;
      out.knots.push_back(x);
      out.segments.push_back(Polynomial::constant(running));
    }
    return out;
  }
  throw InputError("exact cdf is unavailable for rule-based measures");
}

}  // namespace momtail
