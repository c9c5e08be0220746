#include <algorithm>

#include "momtail/cdf.hpp"
#include "momtail/constructions.hpp"
#include "momtail/errors.hpp"

namespace momtail {

namespace {

LocationRule x_rule() { return {LocationRule::Form::Reciprocal, 2, 1, 1}; }
LocationRule y_rule() { return {LocationRule::Form::ReciprocalMidpoint, 2, 1, 1}; }

// From this index on, 1 - x_i/y_i > 1/(4(i+1)(i+2)) >= 2^-i, so c_i = 1 - 2^-i.
constexpr unsigned long kTailFrom = 10;

}  // namespace

Rational discrete_pair_c(unsigned long i) {
  Rational x = x_rule().at(i), y = y_rule().at(i);
  return std::max(Rational(x / y), Rational(1 - 1 / pow(Rational(2), i)));
}

Rational discrete_pair_g_y0() {
  Rational total = 0;
  for (unsigned long i = 1; i < kTailFrom; ++i) total += (1 - discrete_pair_c(i)) / pow(Rational(2), i);
  // sum_{i >= kTailFrom} 4^-i
  total += Rational(4, 3) / pow(Rational(4), kTailFrom);
  return total;
}

DiscretePair discrete_alternating_cdf_pair(const Rational& a, unsigned long truncation, unsigned long cdf_checks,
                                           unsigned long moment_depth) {
  const Rational x1 = x_rule().at(1);
  if (!(a > 1 && a <= x1)) throw InputError("need 1 < a <= x_1 = 3/2");
  if (truncation < 2) throw InputError("truncation must be at least 2");
  if (cdf_checks >= truncation) throw InputError("CDF checks must stay below the truncation index");

  DiscretePair out;
  auto& rep = out.report;
  rep.a = a;
  rep.truncation = truncation;
  rep.tail_from = kTailFrom;
  rep.y0 = (1 + a) / 2;
  rep.g_y0 = discrete_pair_g_y0();

  out.mu_f.location = x_rule();
  out.mu_f.mass = {MassRule::Form::Geometric, 1, Rational(1, 2), {}};
  out.mu_f.truncation = truncation;
  out.mu_f.support_upper_bound = 2;

  out.mu_g.head = {{rep.y0, rep.g_y0}};
  out.mu_g.location = y_rule();
  out.mu_g.mass = {MassRule::Form::DampedGeometric, 1, Rational(1, 2), x_rule()};
  out.mu_g.truncation = truncation;
  out.mu_g.support_upper_bound = 2;
  validate(Measure(out.mu_f));
  validate(Measure(out.mu_g));

  for (unsigned long i = 1; i <= truncation; ++i) {
    rep.c.push_back(discrete_pair_c(i));
    if (!(rep.c.back() < 1)) throw ConstructionFailure("c_i must stay below 1");
    if (i >= kTailFrom && rep.c.back() != 1 - 1 / pow(Rational(2), i))
      throw ConstructionFailure("closed-form tail of g(y0) does not apply at i = " + std::to_string(i));
  }

  Measure f = out.mu_f, g = out.mu_g;
  rep.cdf_alternates = true;
  for (unsigned long k = 1; k <= cdf_checks; ++k) {
    DiscretePairReport::CdfRow row;
    row.k = k;
    row.x = x_rule().at(k);
    row.y = y_rule().at(k);
    row.F_x = cdf(f, row.x);
    row.G_x = cdf(g, row.x);
    row.F_y = cdf(f, row.y);
    row.G_y = cdf(g, row.y);
    row.G_below_at_x = row.G_x.upper() < row.F_x.lower();
    row.G_above_at_y = row.G_y.lower() > row.F_y.upper();
    rep.cdf_alternates = rep.cdf_alternates && row.G_below_at_x && row.G_above_at_y;
    rep.cdf_rows.push_back(std::move(row));
  }

  // Each term g(y_i) y_i^n - f(x_i) x_i^n is nonnegative for n >= 1 because
  // c_i >= x_i / y_i, so dropping the unknown tail keeps a lower bound.
  std::vector<Rational> xs, ys, fm, gm;
  for (unsigned long i = 1; i <= truncation; ++i) {
    xs.push_back(x_rule().at(i));
    ys.push_back(y_rule().at(i));
    fm.push_back(out.mu_f.mass.at(i));
    gm.push_back(out.mu_g.mass.at(i));
  }
  std::vector<Rational> xp(xs), yp(ys);
  Rational y0p = rep.y0;
  rep.moments_dominate = true;
  for (unsigned long n = 1; n <= moment_depth; ++n) {
    DiscretePairReport::MomentRow row;
    row.n = n;
    row.claimed = rep.g_y0 * y0p;
    row.lower_bound = row.claimed;
    row.terms_nonnegative = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      Rational term = gm[i] * yp[i] - fm[i] * xp[i];
      if (term < 0) row.terms_nonnegative = false;
      row.lower_bound += term;
      xp[i] *= xs[i];
      yp[i] *= ys[i];
    }
    row.holds = row.terms_nonnegative && row.lower_bound >= row.claimed && row.claimed > 0;
    rep.moments_dominate = rep.moments_dominate && row.holds;
    rep.moment_rows.push_back(std::move(row));
    y0p *= rep.y0;
  }
  return out;
}

AcPair ac_alternating_cdf_pair(const Rational& a, unsigned long truncation, unsigned long checks, const BumpSpec& spec,
                               unsigned long depth) {
  const Rational x1 = x_rule().at(1);
  if (!(a > 1 && a <= x1)) throw InputError("need 1 < a <= x_1 = 3/2");
  if (truncation < 2 || checks >= truncation) throw InputError("need 2 <= truncation and checks < truncation");
  if (spec.mode != BumpSpec::Mode::ExactPolynomial) throw InputError("smeared pair needs polynomial bumps");

  AcPair out;
  const Rational y0 = (1 + a) / 2;
  const Rational g_y0 = discrete_pair_g_y0();
  MassRule fmass{MassRule::Form::Geometric, 1, Rational(1, 2), {}};
  MassRule gmass{MassRule::Form::DampedGeometric, 1, Rational(1, 2), x_rule()};
  auto x = [](unsigned long k) { return x_rule().at(k); };
  auto y = [&](unsigned long k) { return k == 0 ? y0 : y_rule().at(k); };
  auto z = [&](unsigned long k) -> Rational { return (y(k - 1) + x(k)) / 2; };

  std::vector<PlacedBump> fb, gb;
  Rational mass_f = 0, mass_g = g_y0;
  for (unsigned long k = 1; k <= truncation; ++k) {
    Rational m = fmass.at(k);
    fb.push_back({z(k), x(k), unit_mass_bump(z(k), x(k), spec.degree) * m});
    mass_f += m;
  }
  gb.push_back({y0, z(1), unit_mass_bump(y0, z(1), spec.degree) * g_y0});
  for (unsigned long k = 1; k <= truncation; ++k) {
    Rational m = gmass.at(k);
    gb.push_back({y(k), z(k + 1), unit_mass_bump(y(k), z(k + 1), spec.degree) * m});
    mass_g += m;
  }
  Rational lo = y0, hi = z(truncation + 1);
  out.f = assemble_bumps(lo, hi, std::move(fb), false);
  out.g = assemble_bumps(lo, hi, std::move(gb), false);
  out.missing_f = 1 - mass_f;
  out.missing_g = 1 - mass_g;

  PiecewiseCdf F = exact_cdf(out.f), G = exact_cdf(out.g);
  out.alternates = true;
  for (unsigned long k = 1; k <= checks; ++k) {
    AcPair::Row row;
    row.k = k;
    row.x = x(k);
    row.z_next = z(k + 1);
    row.F_x = F(row.x);
    row.G_x = G(row.x);
    row.F_z = F(row.z_next);
    row.G_z = G(row.z_next);
    row.ok = row.F_x > row.G_x && row.G_z > row.F_z;
    out.alternates = out.alternates && row.ok;
    out.rows.push_back(std::move(row));
  }
  CompareOptions opts;
  opts.depth = depth;
  out.empirical = compare_empirical(out.f, out.g, opts);
  return out;
}

}  // namespace momtail
