#include <algorithm>

#include "momtail/constructions.hpp"
#include "momtail/errors.hpp"
#include "momtail/moment_sweep.hpp"

namespace momtail {

namespace {

// Integral of x^l over [a, b].
Rational power_integral(const Rational& a, const Rational& b, unsigned long l) {
  return (pow(b, l + 1) - pow(a, l + 1)) / static_cast<unsigned long>(l + 1);
}

// Weight of bump i >= 1 in f (take_f) or g: odd bumps carry c_i in f and
// 2c_i/3 in g, even bumps the reverse.
Rational side_weight(const std::vector<Rational>& c, std::size_t i, bool take_f) {
  bool odd = i % 2 == 1;
  const Rational& ci = c[i - 1];
  return (odd == take_f) ? ci : Rational(2 * ci / 3);
}

PiecewisePolyDensity combination(const AlternatingPair& p, const Rational& h0_weight,
                                 const std::vector<Rational>& weights, bool is_signed) {
  std::vector<PlacedBump> placed;
  if (h0_weight != 0) placed.push_back({p.grid[0], p.grid[1], p.bumps[0] * h0_weight});
  for (std::size_t i = 1; i <= weights.size(); ++i)
    if (weights[i - 1] != 0) placed.push_back({p.grid[i], p.grid[i + 1], p.bumps[i] * weights[i - 1]});
  return assemble_bumps(p.grid.front(), p.grid.back(), std::move(placed), is_signed);
}

struct Pick {
  unsigned long ell = 0;
  Rational margin;  // min |M_Q| / int x^l over the accepted run
};

// First l >= from whose moment sign equals `want`; with `padded`, the sign
// must persist on all of [l, 2l].
Pick search_index(const PiecewisePolyDensity& q, int want, unsigned long from, bool padded, unsigned long cap,
                  const Rational& a, const Rational& b) {
  MomentSweep sweep(q, from);
  unsigned long streak_start = 0;
  bool in_streak = false;
  Rational running;
  for (unsigned long step = 0; step <= cap; ++step) {
    if (step > 0) sweep.advance();
    unsigned long k = sweep.order();
    if (sweep.sign() != want) {
      in_streak = false;
      continue;
    }
    Rational margin = abs_value(sweep.value()) / power_integral(a, b, k);
    if (!in_streak) {
      in_streak = true;
      streak_start = k;
      running = margin;
    } else {
      running = std::min(running, margin);
    }
    if (!padded) return {k, running};
    if (k == 2 * streak_start) return {streak_start, running};
  }
  throw ConstructionFailure("no admissible index in [" + std::to_string(from) + ", " + std::to_string(from + cap) +
                            "]" + (padded ? " with a full run" : ""));
}

}  // namespace

AlternatingPair alternating_pair(const Rational& a, const Rational& b, unsigned long N, const BumpSpec& spec,
                                 const AlternatingOptions& options, const PrecisionBudget& budget) {
  if (!(a > 0 && a < b)) throw InputError("alternating pair needs 0 < a < b");
  if (N < 1) throw InputError("alternating pair needs N >= 1");
  if (spec.mode != BumpSpec::Mode::ExactPolynomial) throw InputError("alternating pair needs polynomial bumps");

  AlternatingPair p;
  p.padded = options.padded;
  p.degree = spec.degree;
  const std::size_t J = N + 1;  // constrained steps; bumps h_0..h_J
  for (std::size_t i = 0; i <= J + 1; ++i) p.grid.push_back(b - (b - a) / pow(Rational(2), i));
  for (std::size_t i = 0; i <= J; ++i) {
    p.bumps.push_back(peak_bump(p.grid[i], p.grid[i + 1], spec.degree));
    p.bump_masses.push_back(p.bumps.back().integrate(p.grid[i], p.grid[i + 1]));
  }
  p.D = p.bump_masses[0];
  p.c.push_back(std::min(Rational(1 / (2 * (b - a))), Rational(1)));

  unsigned long previous = 1;
  for (std::size_t j = 1; j <= J; ++j) {
    // Q_j = f-side minus g-side over bumps 0..j, with h_0 weighted against the
    // inequality being imposed.
    bool odd = j % 2 == 1;
    std::vector<Rational> weights;
    for (std::size_t i = 1; i <= j; ++i) weights.push_back(side_weight(p.c, i, true) - side_weight(p.c, i, false));
    Rational h0 = odd ? Rational(-1 / p.D) : Rational(1 / p.D);
    PiecewisePolyDensity q = combination(p, h0, weights, true);

    unsigned long from = options.padded ? 2 * previous + 1 : previous + 1;
    Pick pick = search_index(q, odd ? 1 : -1, from, options.padded, options.ell_search_cap, a, b);
    budget.check(pick.margin, "alternating slack");
    p.indices.push_back(pick.ell);
    p.c.push_back(std::min(pick.margin, p.c.back()) / 2);
    previous = pick.ell;
  }

  Rational mass_f = 0, mass_g = 0;
  std::vector<Rational> wf, wg;
  for (std::size_t i = 1; i <= J; ++i) {
    wf.push_back(side_weight(p.c, i, true));
    wg.push_back(side_weight(p.c, i, false));
    mass_f += wf.back() * p.bump_masses[i];
    mass_g += wg.back() * p.bump_masses[i];
  }
  p.d = (1 - mass_f) / p.D;
  p.d_prime = (1 - mass_g) / p.D;
  p.f = combination(p, p.d, wf, false);
  p.g = combination(p, p.d_prime, wg, false);
  validate(p.f);
  validate(p.g);
  verify_alternating(p);
  return p;
}

void verify_alternating(const AlternatingPair& p) {
  if (moment(p.f, 0).value != 1 || moment(p.g, 0).value != 1)
    throw ConstructionFailure("alternating pair masses are not exactly 1");
  for (std::size_t i = 0; i < p.c.size(); ++i) {
    if (p.c[i] <= 0) throw ConstructionFailure("coefficient c_" + std::to_string(i + 1) + " is not positive");
    if (i > 0 && !(p.c[i] < p.c[i - 1])) throw ConstructionFailure("coefficients c_i are not strictly decreasing");
  }
  for (std::size_t n = 0; n < p.indices.size(); ++n) {
    unsigned long l = p.indices[n];
    if (n > 0 && !(p.indices[n - 1] < l)) throw ConstructionFailure("indices are not strictly increasing");
    Rational diff = moment(p.f, l).value - moment(p.g, l).value;
    int want = n % 2 == 0 ? 1 : -1;
    if (sign(diff) != want)
      throw ConstructionFailure("sign of s_l(f) - s_l(g) at l = " + std::to_string(l) + " is not the imposed one");
  }
}

RunReport run_padded_alternating(const AlternatingPair& pair) {
  RunReport out;
  if (pair.indices.empty()) return out;
  out.depth = 2 * pair.indices.back();
  std::vector<int> signs(out.depth + 1);
  MomentSweep sweep(combine(-1, pair.f, 1, pair.g));
  for (unsigned long k = 0; k <= out.depth; ++k) {
    if (k > 0) sweep.advance();
    signs[k] = sweep.sign();
    if (signs[k] > 0) out.M1.push_back(k);
    if (signs[k] < 0) out.M2.push_back(k);
  }
  out.all_hold = true;
  for (std::size_t n = 0; n < pair.indices.size(); ++n) {
    RunReport::Run run;
    run.start = pair.indices[n];
    run.end = 2 * run.start;
    run.sign = n % 2 == 0 ? -1 : 1;
    for (unsigned long i = run.start; i <= run.end; ++i) {
      run.harmonic += Rational(1, i);
      if (!run.first_failure && signs[i] != run.sign) run.first_failure = i;
    }
    run.holds = !run.first_failure.has_value();
    out.all_hold = out.all_hold && run.holds;
    out.runs.push_back(std::move(run));
  }
  return out;
}

// ---------------------------------------------------------------------------

int derivative_sign_changes(const PiecewisePolyDensity& d) {
  int changes = 0, last = 0;
  for (std::size_t i = 0; i < d.pieces.size(); ++i) {
    Polynomial dp = d.pieces[i].derivative();
    if (dp.is_zero()) continue;
    for (const auto& x : sign_sample_points(dp, d.breakpoints[i], d.breakpoints[i + 1])) {
      int s = sign(dp(x));
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
  }
  return changes;
}

UnimodalPair unimodal_alternating_pair(const Rational& a, const Rational& b, unsigned long N, const BumpSpec& spec,
                                       const AlternatingOptions& options, const PrecisionBudget& budget) {
  if (!(a > 0 && a < b)) throw InputError("unimodal pair needs 0 < a < b");
  if (spec.mode != BumpSpec::Mode::ExactPolynomial) throw InputError("unimodal pair needs polynomial bumps");
  UnimodalPair out;
  Polynomial h = unit_mass_bump(a, b, spec.degree);
  out.base = make_density({a, b}, {h});
  Polynomial h1 = h.derivative(), h2 = h1.derivative();

  // On (mid, b) the bump decreases and -h' rises to the single inflection
  // point, then falls; so on any [c, d] inside the flank min(-h') is attained
  // at c or d. That lets [c, d] cover most of the flank, which keeps the inner
  // alternation indices small.
  Rational mid = (a + b) / 2;
  if (!isolate_roots(h1, mid, b).empty()) throw ConstructionFailure("base bump is not monotone right of its mode");
  if (isolate_roots(h2, mid, b).size() != 1)
    throw ConstructionFailure("base bump needs exactly one inflection point right of its mode");
  out.c = mid + (b - mid) / 16;
  out.d = b - (b - mid) / 16;
  if (!(h1(out.c) < 0 && h1(out.d) < 0)) throw ConstructionFailure("h is not decreasing on [c, d]");
  out.K = std::min(Rational(-h1(out.c)), Rational(-h1(out.d)));

  out.inner = alternating_pair(out.c, out.d, N, spec, options, budget);
  out.L = 0;
  for (const auto* dens : {&out.inner.f, &out.inner.g})
    for (std::size_t i = 0; i < dens->pieces.size(); ++i)
      out.L = std::max(out.L, abs_upper_bound_on(dens->pieces[i].derivative(), dens->breakpoints[i],
                                                 dens->breakpoints[i + 1]));
  if (out.L <= 0) throw ConstructionFailure("inner densities have zero derivative bound");
  out.alpha = out.K / (out.L + out.K);

  out.f = combine(out.alpha, out.inner.f, 1 - out.alpha, out.base);
  out.g = combine(out.alpha, out.inner.g, 1 - out.alpha, out.base);
  validate(out.f);
  validate(out.g);
  out.indices = out.inner.indices;
  out.f_derivative_sign_changes = derivative_sign_changes(out.f);
  out.g_derivative_sign_changes = derivative_sign_changes(out.g);

  out.scaling_identity_holds = true;
  for (unsigned long l : out.indices) {
    Rational outer = moment(out.f, l).value - moment(out.g, l).value;
    Rational inner = moment(out.inner.f, l).value - moment(out.inner.g, l).value;
    if (outer != out.alpha * inner) out.scaling_identity_holds = false;
  }
  if (out.f_derivative_sign_changes != 1 || out.g_derivative_sign_changes != 1)
    throw ConstructionFailure("mixed densities are not unimodal");
  if (!out.scaling_identity_holds) throw ConstructionFailure("moment differences do not scale by alpha");
  return out;
}

// ---------------------------------------------------------------------------

MixedDemo mixed_incomparable_demo(const AlternatingPair& pair) {
  MixedDemo out;
  const std::size_t J = pair.bumps.size() - 1;
  std::vector<Rational> w1, w2;
  Rational m1 = 0, m2 = 0;
  for (std::size_t i = 1; i <= J; ++i) {
    const Rational& ci = pair.c[i - 1];
    w1.push_back(ci / 3);
    w2.push_back(i % 2 == 1 ? Rational(5 * ci / 3) : ci);
    m1 += w1.back() * pair.bump_masses[i];
    m2 += w2.back() * pair.bump_masses[i];
  }
  out.gamma1 = (1 - m1) / pair.D;
  out.gamma2 = (1 - m2) / pair.D;
  if (out.gamma1 <= 0 || out.gamma2 <= 0) throw ConstructionFailure("mixture weights gamma are not positive");
  out.f1 = combination(pair, out.gamma1, w1, false);
  out.f2 = combination(pair, out.gamma2, w2, false);
  out.g = pair.g;
  out.mixture = combine(Rational(1, 2), out.f1, Rational(1, 2), out.f2);
  out.mixture_is_f = same_density(out.mixture, pair.f);

  out.x0 = (pair.grid[1] + pair.grid[2]) / 2;
  out.below = certify_eventual_positive(combine(-1, out.f1, 1, out.g), out.x0);
  out.above = certify_eventual_positive(combine(-1, out.g, 1, out.f2), out.x0);

  out.mixture_alternates = true;
  for (unsigned long l : pair.indices) {
    int s = sign(moment(out.g, l).value - moment(out.mixture, l).value);
    if (!out.mixture_signs.empty() && (s == 0 || s == out.mixture_signs.back().second)) out.mixture_alternates = false;
    if (s == 0) out.mixture_alternates = false;
    out.mixture_signs.emplace_back(l, s);
  }
  return out;
}

}  // namespace momtail
