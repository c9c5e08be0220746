#include <doctest.h>

#include <cmath>

#include "momtail/cdf.hpp"
#include "momtail/moment_sweep.hpp"
#include "momtail/serialize.hpp"
#include "support.hpp"

using namespace momtail;
using test::q;

namespace {

Measure point_mass(const Rational& x) { return DiscreteFinite{{{x, 1}}}; }

// x_k = 2 - 1/(k+1) carrying 2^-k.
DiscreteRule halving_rule(unsigned long truncation) {
  DiscreteRule r;
  r.location = {LocationRule::Form::Reciprocal, 2, 1, 1};
  r.mass = {MassRule::Form::Geometric, 1, Rational(1, 2), {}};
  r.truncation = truncation;
  r.support_upper_bound = 2;
  return r;
}

// Independent of MomentSweep: piecewise antiderivative evaluation.
Rational direct_moment(const PiecewisePolyDensity& d, unsigned long k) {
  Rational s = 0;
  for (std::size_t i = 0; i < d.pieces.size(); ++i)
    s += d.pieces[i].integrate_times_power(d.breakpoints[i], d.breakpoints[i + 1], k);
  return s;
}

}  // namespace

TEST_SUITE("measures") {

TEST_CASE("point mass and uniform moments") {
  CHECK(moment(point_mass(2), 5).value == 32);
  CHECK(moment(point_mass(2), 5).exact());
  Measure u = uniform_density(1, 2);
  CHECK(moment(u, 0).value == 1);
  CHECK(moment(u, 1).value == q("3/2"));
  CHECK(total_mass(u).value == 1);
}

TEST_CASE("rule-based moments carry a tail interval that overlaps a deeper truncation") {
  DiscreteRule shallow = halving_rule(40), deep = halving_rule(60);
  MomentValue a = moment(shallow, 3), b = moment(deep, 3);
  CHECK(a.error_radius <= pow(Rational(1, 2), 40) * 8);
  CHECK(a.error_radius > 0);
  CHECK(a.lower() <= b.upper());
  CHECK(b.lower() <= a.upper());
  // Truncations are nested, so the deeper interval lies inside the shallower one.
  CHECK(a.lower() <= b.lower());
  CHECK(b.upper() <= a.upper());
}

TEST_CASE("rule intervals overlap across truncations for many orders") {
  for (unsigned long t1 : {5ul, 12ul, 25ul})
    for (unsigned long k = 0; k <= 30; k += 3) {
      MomentValue a = moment(halving_rule(t1), k), b = moment(halving_rule(t1 + 7), k);
      CHECK(a.lower() <= b.upper());
      CHECK(b.lower() <= a.upper());
    }
}

TEST_CASE("cdf conventions") {
  CHECK(cdf(point_mass(2), q("1.9")).value == 0);
  CHECK(cdf(point_mass(2), 2).value == 1);
  CHECK(cdf(uniform_density(1, 2), q("3/2")).value == q("1/2"));
  PiecewisePolyDensity s = make_density({1, 2}, {Polynomial({-3, 2})}, true);
  CHECK_THROWS_AS(cdf(s, q("3/2")), InputError);
}

TEST_CASE("carleman partial sums") {
  CHECK(carleman_partial_sum(point_mass(1), 10) == doctest::Approx(10.0));
  CHECK(carleman_partial_sum(point_mass(4), 2) == doctest::Approx(1.0));
  double direct = 0;
  for (int k = 1; k <= 20; ++k) direct += std::pow((std::pow(2.0, k + 1) - 1) / (k + 1), -1.0 / (2 * k));
  CHECK(carleman_partial_sum(uniform_density(1, 2), 20) == doctest::Approx(direct).epsilon(1e-12));
  CHECK_THROWS(carleman_partial_sum(DiscreteFinite{}, 3));
}

TEST_CASE("validation rejects broken representations") {
  CHECK_THROWS_AS(validate(Measure{DiscreteFinite{{{0, 1}}}}), InputError);
  CHECK_THROWS_AS(validate(Measure{DiscreteFinite{{{1, -1}}}}), InputError);
  CHECK_THROWS_AS(make_density({2, 1}, {Polynomial::constant(1)}), InputError);
  CHECK_THROWS_AS(make_density({1, 2}, {Polynomial({-3, 2})}), InputError);  // negative left of 3/2
  CHECK_NOTHROW(make_density({1, 2}, {Polynomial({-3, 2})}, true));
}

TEST_CASE("integer sweep agrees with direct integration, including after seek") {
  test::Gen gen(21);
  for (int trial = 0; trial < 15; ++trial) {
    auto bps = gen.breakpoints(q("1/2"), 2, 4, 6);
    std::vector<Polynomial> pieces;
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) pieces.push_back(gen.polynomial(3, 5));
    PiecewisePolyDensity d = make_density(bps, pieces, true);
    MomentSweep sweep(d);
    for (unsigned long k = 0; k <= 40; ++k) {
      if (k > 0) sweep.advance();
      CHECK(sweep.value() == direct_moment(d, k));
      CHECK(sweep.sign() == sign(direct_moment(d, k)));
    }
    sweep.seek(97);
    CHECK(sweep.value() == direct_moment(d, 97));
    MomentSweep late(d, 150);
    CHECK(late.value() == direct_moment(d, 150));
  }
}

TEST_CASE("moment bounds a^k m <= s_k <= b^k m on random unsigned densities") {
  test::Gen gen(22);
  for (int trial = 0; trial < 25; ++trial) {
    PiecewisePolyDensity d = gen.piecewise_linear(1, 2, 5, 8);
    Rational m = moment(d, 0).value;
    for (unsigned long k : {1ul, 5ul, 20ul, 60ul}) {
      Rational s = moment(d, k).value;
      CHECK(s >= m);
      CHECK(s <= pow(Rational(2), k) * m);
    }
  }
}

TEST_CASE("moments are linear in the density") {
  test::Gen gen(23);
  for (int trial = 0; trial < 20; ++trial) {
    PiecewisePolyDensity d1 = gen.piecewise_linear(1, 2, 4, 6), d2 = gen.piecewise_linear(1, 2, 3, 5);
    Rational alpha = gen.fraction(-2, 2, 7), beta = gen.fraction(-2, 2, 9);
    PiecewisePolyDensity c = combine(alpha, d1, beta, d2);
    for (unsigned long k : {0ul, 3ul, 17ul})
      CHECK(moment(c, k).value == alpha * moment(d1, k).value + beta * moment(d2, k).value);
  }
}

TEST_CASE("cdf is nondecreasing and reaches the total mass at the right end") {
  test::Gen gen(24);
  for (int trial = 0; trial < 20; ++trial) {
    PiecewisePolyDensity d = gen.piecewise_linear(1, 2, 5, 8);
    Rational last = -1;
    for (int i = 0; i <= 40; ++i) {
      Rational v = cdf(d, Rational(1) + ratio(i, 40)).value;
      CHECK(v >= last);
      last = v;
    }
    CHECK(last == total_mass(d).value);
    CHECK(exact_cdf(d)(2) == last);
  }
  DiscreteFinite atoms{{{1, q("1/4")}, {q("3/2"), q("1/2")}, {2, q("1/4")}}};
  PiecewiseCdf F = exact_cdf(atoms);
  CHECK(F(q("1.49")) == q("1/4"));
  CHECK(F(q("3/2")) == q("3/4"));
  CHECK(F(5) == 1);
}

TEST_CASE("JSON round-trip for every measure kind") {
  std::vector<Measure> ms{point_mass(q("5/3")), Measure{halving_rule(12)},
                          make_density({1, q("3/2"), 2}, {Polynomial({1}), Polynomial({-1, 1})})};
  for (const auto& m : ms) {
    Measure back = measure_from_json(to_json(m));
    CHECK(to_json(back) == to_json(m));
    for (unsigned long k : {0ul, 4ul}) {
      CHECK(moment(back, k).value == moment(m, k).value);
      CHECK(moment(back, k).error_radius == moment(m, k).error_radius);
    }
  }
  CHECK_THROWS_AS(measure_from_json(Json{{"kind", "wavelet"}}), InputError);
  std::string csv = moment_table_csv(moment_table(point_mass(2), 3));
  CHECK(csv.rfind("k,value,error_radius,exact", 0) == 0);
}

}  // TEST_SUITE
