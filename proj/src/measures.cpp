#include "momtail/measures.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "momtail/errors.hpp"
#include "momtail/moment_sweep.hpp"

namespace momtail {

Rational LocationRule::at(unsigned long k) const {
  if (form == Form::ReciprocalMidpoint) {
    LocationRule b = base();
    return (b.at(k) + b.at(k + 1)) / 2;
  }
  return p - q / (Rational(static_cast<long>(k)) + r);
}

Rational MassRule::at(unsigned long k) const {
  Rational rk = pow(ratio, k);
  Rational m = scale * rk;
  if (form == Form::DampedGeometric) {
    LocationRule x = damping.base();
    LocationRule y = x;
    y.form = LocationRule::Form::ReciprocalMidpoint;
    Rational factor = std::max(Rational(x.at(k) / y.at(k)), Rational(1 - rk));
    m *= factor;
  }
  return m;
}

Rational MassRule::tail_bound(unsigned long k) const {
  // The damping factor never exceeds 1, so the geometric tail dominates.
  return scale * pow(ratio, k + 1) / (1 - ratio);
}

DiscreteFinite DiscreteRule::truncated() const {
  DiscreteFinite out;
  out.atoms = head;
  for (unsigned long k = 1; k <= truncation; ++k) out.atoms.push_back({location.at(k), mass.at(k)});
  return out;
}

Rational PiecewisePolyDensity::value_at(const Rational& x) const {
  if (x < lower() || x > upper()) return 0;
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  std::size_t i = static_cast<std::size_t>(it - breakpoints.begin());
  i = i == 0 ? 0 : i - 1;
  if (i >= pieces.size()) i = pieces.size() - 1;
  return pieces[i](x);
}

// ---------------------------------------------------------------------------

namespace {

void validate_atoms(const std::vector<Atom>& atoms) {
  for (const auto& a : atoms) {
    if (a.location <= 0) throw InputError("atom location must be positive, got " + to_string(a.location));
    if (a.mass <= 0) throw InputError("atom mass must be positive, got " + to_string(a.mass));
  }
}

void validate_rule(const DiscreteRule& r) {
  validate_atoms(r.head);
  if (r.truncation < 1) throw InputError("truncation index must be at least 1");
  if (r.location.q <= 0 || r.location.r <= -1) throw InputError("location rule must be increasing in k >= 1");
  LocationRule base = r.location.base();
  if (base.at(1) <= 0) throw InputError("location rule yields a nonpositive first atom");
  if (base.p > r.support_upper_bound) throw InputError("location rule exceeds the support upper bound");
  for (const auto& a : r.head)
    if (a.location > r.support_upper_bound) throw InputError("head atom exceeds the support upper bound");
  if (r.mass.scale <= 0 || r.mass.ratio <= 0 || r.mass.ratio >= 1)
    throw InputError("mass rule needs scale > 0 and ratio in (0, 1)");
  if (r.mass.form == MassRule::Form::DampedGeometric) {
    LocationRule d = r.mass.damping.base();
    if (d.q <= 0 || d.at(1) <= 0) throw InputError("damping location rule must be positive and increasing");
  }
}

}  // namespace

void validate(const PiecewisePolyDensity& d) {
  if (d.breakpoints.size() < 2) throw InputError("density needs at least two breakpoints");
  if (d.pieces.size() + 1 != d.breakpoints.size()) throw InputError("density needs one piece per breakpoint interval");
  if (d.breakpoints.front() <= 0) throw InputError("density support must lie in (0, inf)");
  for (std::size_t i = 1; i < d.breakpoints.size(); ++i)
    if (!(d.breakpoints[i - 1] < d.breakpoints[i])) throw InputError("breakpoints must be strictly increasing");
  if (!d.is_signed) {
    if (auto x = find_negative_value(d))
      throw InputError("density flagged unsigned is negative at x = " + to_string(*x));
  }
}

void validate(const Measure& mu) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DiscreteFinite>) {
          if (m.atoms.empty()) throw InputError("discrete measure has no atoms");
          validate_atoms(m.atoms);
        } else if constexpr (std::is_same_v<T, DiscreteRule>) {
          validate_rule(m);
        } else {
          validate(m);
        }
      },
      mu);
}

bool is_signed(const Measure& mu) {
  if (auto d = std::get_if<PiecewisePolyDensity>(&mu)) return d->is_signed;
  return false;
}

std::pair<Rational, Rational> support_bounds(const Measure& mu) {
  if (auto d = std::get_if<PiecewisePolyDensity>(&mu)) return {d->lower(), d->upper()};
  if (auto f = std::get_if<DiscreteFinite>(&mu)) {
    if (f->atoms.empty()) throw InputError("discrete measure has no atoms");
    Rational lo = f->atoms.front().location, hi = lo;
    for (const auto& a : f->atoms) {
      lo = std::min(lo, a.location);
      hi = std::max(hi, a.location);
    }
    return {lo, hi};
  }
  const auto& r = std::get<DiscreteRule>(mu);
  Rational lo = r.location.at(1);
  for (const auto& a : r.head) lo = std::min(lo, a.location);
  return {lo, r.support_upper_bound};
}

// ---------------------------------------------------------------------------

namespace {

Rational atoms_moment(const std::vector<Atom>& atoms, unsigned long k) {
  Rational total = 0;
  for (const auto& a : atoms) total += a.mass * pow(a.location, k);
  return total;
}

}  // namespace

MomentValue moment(const Measure& mu, unsigned long k, const PrecisionBudget& budget) {
  MomentValue out;
  if (auto d = std::get_if<PiecewisePolyDensity>(&mu)) {
    out.value = MomentSweep(*d, k).value();
  } else if (auto f = std::get_if<DiscreteFinite>(&mu)) {
    out.value = atoms_moment(f->atoms, k);
  } else {
    const auto& r = std::get<DiscreteRule>(mu);
    out.value = atoms_moment(r.truncated().atoms, k);
    out.error_radius = r.mass.tail_bound(r.truncation) * pow(r.support_upper_bound, k);
  }
  budget.check(out.value, "moment value");
  budget.check(out.error_radius, "moment error radius");
  return out;
}

std::vector<MomentValue> moment_table(const Measure& mu, unsigned long k_max, const PrecisionBudget& budget) {
  std::vector<MomentValue> table;
  table.reserve(k_max + 1);
  if (auto d = std::get_if<PiecewisePolyDensity>(&mu)) {
    MomentSweep sweep(*d);
    for (unsigned long k = 0; k <= k_max; ++k) {
      if (k > 0) sweep.advance();
      MomentValue v;
      v.value = sweep.value();
      budget.check(v.value, "moment value");
      table.push_back(std::move(v));
    }
    return table;
  }
  std::vector<Atom> atoms;
  Rational tail = 0, bound = 1;
  if (auto f = std::get_if<DiscreteFinite>(&mu)) {
    atoms = f->atoms;
  } else {
    const auto& r = std::get<DiscreteRule>(mu);
    atoms = r.truncated().atoms;
    tail = r.mass.tail_bound(r.truncation);
    bound = r.support_upper_bound;
  }
  std::vector<Rational> powers(atoms.size(), Rational(1));
  Rational radius = tail;
  for (unsigned long k = 0; k <= k_max; ++k) {
    MomentValue v;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      v.value += atoms[i].mass * powers[i];
      powers[i] *= atoms[i].location;
    }
    v.error_radius = radius;
    radius *= bound;
    budget.check(v.value, "moment value");
    table.push_back(std::move(v));
  }
  return table;
}

MomentValue total_mass(const Measure& mu, const PrecisionBudget& budget) { return moment(mu, 0, budget); }

MomentValue cdf(const Measure& mu, const Rational& x) {
  MomentValue out;
  if (auto d = std::get_if<PiecewisePolyDensity>(&mu)) {
    if (d->is_signed) throw InputError("cdf requires an unsigned measure");
    for (std::size_t i = 0; i < d->pieces.size(); ++i) {
      const Rational& lo = d->breakpoints[i];
      if (x <= lo) break;
      Rational hi = std::min(x, d->breakpoints[i + 1]);
      out.value += d->pieces[i].integrate(lo, hi);
    }
    return out;
  }
  if (auto f = std::get_if<DiscreteFinite>(&mu)) {
    for (const auto& a : f->atoms)
      if (a.location <= x) out.value += a.mass;
    return out;
  }
  const auto& r = std::get<DiscreteRule>(mu);
  for (const auto& a : r.truncated().atoms)
    if (a.location <= x) out.value += a.mass;
  // Atoms beyond the truncation sit at or right of location(T + 1).
  if (x >= r.location.at(r.truncation + 1)) {
    Rational half = r.mass.tail_bound(r.truncation) / 2;
    out.value += half;
    out.error_radius = half;
  }
  return out;
}

namespace {

double log_of(const Rational& q) {
  long e_num = 0, e_den = 0;
  double m_num = mpz_get_d_2exp(&e_num, q.get_num_mpz_t());
  double m_den = mpz_get_d_2exp(&e_den, q.get_den_mpz_t());
  return std::log(m_num) - std::log(m_den) + static_cast<double>(e_num - e_den) * std::log(2.0);
}

}  // namespace

double carleman_partial_sum(const Measure& mu, unsigned long K) {
  if (is_signed(mu)) throw InputError("Carleman sum requires an unsigned measure");
  auto table = moment_table(mu, K);
  if (table[0].value <= 0) throw InputError("Carleman sum is undefined for a zero measure");
  double sum = 0;
  for (unsigned long k = 1; k <= K; ++k) sum += std::exp(-log_of(table[k].value) / (2.0 * static_cast<double>(k)));
  return sum;
}

// ---------------------------------------------------------------------------

PiecewisePolyDensity make_density(std::vector<Rational> breakpoints, std::vector<Polynomial> pieces,
                                  bool is_signed) {
  PiecewisePolyDensity d{std::move(breakpoints), std::move(pieces), is_signed};
  validate(d);
  return d;
}

PiecewisePolyDensity uniform_density(const Rational& lo, const Rational& hi) {
  return make_density({lo, hi}, {Polynomial::constant(1 / (hi - lo))});
}

namespace {

// Piece of d covering the open interval (lo, hi) of a refinement.
Polynomial piece_over(const PiecewisePolyDensity& d, const Rational& lo, const Rational& hi) {
  if (hi <= d.lower() || lo >= d.upper()) return {};
  auto it = std::upper_bound(d.breakpoints.begin(), d.breakpoints.end(), lo);
  std::size_t i = static_cast<std::size_t>(it - d.breakpoints.begin()) - 1;
  return d.pieces[i];
}

}  // namespace

PiecewisePolyDensity combine(const Rational& alpha, const PiecewisePolyDensity& a, const Rational& beta,
                             const PiecewisePolyDensity& b) {
  std::set<Rational> knots(a.breakpoints.begin(), a.breakpoints.end());
  knots.insert(b.breakpoints.begin(), b.breakpoints.end());
  PiecewisePolyDensity out;
  out.breakpoints.assign(knots.begin(), knots.end());
  for (std::size_t i = 0; i + 1 < out.breakpoints.size(); ++i) {
    const Rational& lo = out.breakpoints[i];
    const Rational& hi = out.breakpoints[i + 1];
    out.pieces.push_back(alpha * piece_over(a, lo, hi) + beta * piece_over(b, lo, hi));
  }
  out.is_signed = a.is_signed || b.is_signed || alpha < 0 || beta < 0;
  return out;
}

PiecewisePolyDensity scaled(const PiecewisePolyDensity& d, const Rational& factor) {
  PiecewisePolyDensity out = d;
  for (auto& p : out.pieces) p *= factor;
  if (factor < 0) out.is_signed = true;
  return out;
}

PiecewisePolyDensity simplified(PiecewisePolyDensity d) {
  PiecewisePolyDensity out;
  out.is_signed = d.is_signed;
  out.breakpoints.push_back(d.breakpoints.front());
  for (std::size_t i = 0; i < d.pieces.size(); ++i) {
    if (!out.pieces.empty() && out.pieces.back() == d.pieces[i]) {
      out.breakpoints.back() = d.breakpoints[i + 1];
      continue;
    }
    out.pieces.push_back(d.pieces[i]);
    out.breakpoints.push_back(d.breakpoints[i + 1]);
  }
  while (out.pieces.size() > 1 && out.pieces.front().is_zero()) {
    out.pieces.erase(out.pieces.begin());
    out.breakpoints.erase(out.breakpoints.begin());
  }
  while (out.pieces.size() > 1 && out.pieces.back().is_zero()) {
    out.pieces.pop_back();
    out.breakpoints.pop_back();
  }
  return out;
}

PiecewisePolyDensity derivative(const PiecewisePolyDensity& d) {
  PiecewisePolyDensity out = d;
  for (auto& p : out.pieces) p = p.derivative();
  out.is_signed = true;
  return out;
}

std::optional<Rational> find_negative_value(const PiecewisePolyDensity& d) {
  for (std::size_t i = 0; i < d.pieces.size(); ++i)
    if (auto x = find_negative_point(d.pieces[i], d.breakpoints[i], d.breakpoints[i + 1])) return x;
  return std::nullopt;
}

bool same_density(const PiecewisePolyDensity& a, const PiecewisePolyDensity& b) {
  PiecewisePolyDensity sa = simplified(a), sb = simplified(b);
  bool za = sa.pieces.size() == 1 && sa.pieces[0].is_zero();
  bool zb = sb.pieces.size() == 1 && sb.pieces[0].is_zero();
  if (za || zb) return za && zb;
  return sa.breakpoints == sb.breakpoints && sa.pieces == sb.pieces;
}

}  // namespace momtail
