#include <doctest.h>

#include "momtail/constructions.hpp"
#include "momtail/tailorder.hpp"
#include "support.hpp"

using namespace momtail;
using test::q;

namespace {

int verdict_sign(const TailVerdict& v) {
  if (v.is<StrictlyBelow>()) return 1;
  if (v.is<StrictlyAbove>()) return -1;
  if (v.is<EqualPrefix>()) return 0;
  return 2;
}

// Closed form of the integral of (2x - 3) x^k over [1, 2].
Rational linear_moment(unsigned long k) {
  Rational two_k1 = pow(Rational(2), k + 1), two_k2 = 2 * two_k1;
  return 2 * (two_k2 - 1) / static_cast<unsigned long>(k + 2) - 3 * (two_k1 - 1) / static_cast<unsigned long>(k + 1);
}

}  // namespace

TEST_SUITE("tailorder") {

TEST_CASE("prefix comparison on trivial pairs") {
  Measure u = uniform_density(1, 2);
  TailVerdict same = compare_empirical(u, u, {50});
  REQUIRE(same.is<EqualPrefix>());
  CHECK(same.as<EqualPrefix>().agree_from == 0);
  CHECK(same.evidence == Evidence::Heuristic);

  Measure d1 = DiscreteFinite{{{1, 1}}}, d2 = DiscreteFinite{{{2, 1}}};
  TailVerdict below = compare_empirical(d1, d2, {10});
  REQUIRE(below.is<StrictlyBelow>());
  const auto& cert = std::get<MomentPrefix>(below.as<StrictlyBelow>().certificate);
  CHECK(cert.n0 == 1);  // equal masses at k = 0
  CHECK(cert.checked_to == 10);
  CHECK(compare_empirical(d2, d1, {10}).is<StrictlyAbove>());
}

TEST_CASE("sign sequence of a pair with matching mass and mean") {
  // s_k(mu2) - s_k(mu1) = 2^(k+1) - 1 - 3^k: zero for k = 0, 1, negative after.
  Measure mu1 = DiscreteFinite{{{1, 1}, {3, 1}}};
  Measure mu2 = DiscreteFinite{{{2, 2}}};
  CHECK(moment_difference_signs(mu1, mu2, 6) == std::vector<int>{0, 0, -1, -1, -1, -1, -1});
  TailVerdict v = compare_empirical(mu1, mu2, {12});
  REQUIRE(v.is<StrictlyAbove>());
  CHECK(std::get<MomentPrefix>(v.as<StrictlyAbove>().certificate).n0 == 2);
}

TEST_CASE("eventual positivity of 2x - 3 matches the closed-form moment scan") {
  PiecewisePolyDensity f = make_density({1, 2}, {Polynomial({-3, 2})}, true);
  unsigned long first = 0;
  while (linear_moment(first) <= 0) ++first;
  PositivityCertificate c = certify_eventual_positive(f, q("7/4"));
  CHECK(c.certified);
  REQUIRE(c.n0.has_value());
  CHECK(*c.n0 == first);
  CHECK(first == 1);  // frozen from the scan above

  PositivityCertificate at_root = certify_eventual_positive(f, q("5/4"));
  CHECK_FALSE(at_root.certified);
  REQUIRE(at_root.witness.has_value());

  PiecewisePolyDensity pos = uniform_density(1, 2);
  PositivityCertificate trivial = certify_eventual_positive(pos, 1);
  CHECK(trivial.certified);
  CHECK(*trivial.n0 == 0);
}

TEST_CASE("cdf dominance certificates") {
  Measure d1 = DiscreteFinite{{{1, 1}}}, d2 = DiscreteFinite{{{2, 1}}};
  CertifyResult r = certify_cdf_dominance(d1, d2, q("3/2"));
  CHECK(r.certified);
  CHECK(r.verdict.is<StrictlyBelow>());
  CHECK(r.verdict.evidence == Evidence::Proved);
  CHECK(certify_cdf_dominance(uniform_density(1, 2), d2, q("3/2")).certified);
  CHECK_FALSE(certify_cdf_dominance(d2, d1, q("3/2")).certified);
}

TEST_CASE("alternating CDFs defeat the certifier while moments still dominate") {
  DiscretePair p = discrete_alternating_cdf_pair(q("7/5"), 40, 5, 20);
  Measure f = p.mu_f, g = p.mu_g;
  CertifyResult r = certify_cdf_dominance(f, g, q("3/2"));
  CHECK_FALSE(r.certified);
  CHECK(r.witness.has_value());
  CHECK(p.report.moments_dominate);
}

TEST_CASE("density dominance") {
  PiecewisePolyDensity u = uniform_density(1, 2);
  PiecewisePolyDensity tilted = make_density({1, 2}, {Polynomial({-1, 1})});  // x - 1
  CertifyResult r = certify_density_dominance(u, combine(1, u, 1, tilted), q("3/2"));
  CHECK(r.certified);
  CHECK(r.verdict.is<StrictlyBelow>());
}

TEST_CASE("decide_piecewise matches deep exact moment signs on random pairs") {
  test::Gen gen(31);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    PiecewisePolyDensity d1 = gen.piecewise_linear(1, 2, 4, 8), d2 = gen.piecewise_linear(1, 2, 4, 8);
    TailVerdict v = decide_piecewise(d1, d2);
    CHECK(v.evidence == Evidence::Proved);
    CHECK_FALSE(v.is<Undetermined>());
    CHECK_FALSE(v.is<AlternationWitness>());
    for (unsigned long k : {200ul, 400ul})
      CHECK(verdict_sign(v) == sign(moment(d2, k).value - moment(d1, k).value));
    ++checked;
  }
  CHECK(checked == 40);
}

TEST_CASE("decide_piecewise in both directions is antisymmetric") {
  test::Gen gen(32);
  for (int trial = 0; trial < 30; ++trial) {
    PiecewisePolyDensity d1 = gen.piecewise_linear(1, 2, 3, 4);
    PiecewisePolyDensity d2 = trial % 3 == 0 ? d1 : gen.piecewise_linear(1, 2, 3, 4);
    int forward = verdict_sign(decide_piecewise(d1, d2)), backward = verdict_sign(decide_piecewise(d2, d1));
    CHECK(forward == -backward);
    if (forward == 0) CHECK(same_density(d1, d2));
  }
}

TEST_CASE("a certified cdf dominance is never contradicted by the prefix") {
  test::Gen gen(33);
  int certified = 0;
  for (int trial = 0; trial < 40; ++trial) {
    PiecewisePolyDensity d1 = gen.piecewise_linear(1, 2, 3, 4), d2 = gen.piecewise_linear(1, 2, 3, 4);
    // Equal masses make CDF comparisons meaningful.
    d1 = scaled(d1, 1 / moment(d1, 0).value);
    d2 = scaled(d2, 1 / moment(d2, 0).value);
    CertifyResult r = certify_cdf_dominance(d1, d2, q("7/4"));
    if (!r.certified) continue;
    ++certified;
    CHECK_FALSE(compare_empirical(d1, d2, {200}).is<StrictlyAbove>());
  }
  CHECK(certified > 0);
}

TEST_CASE("signed densities are refused by the decision procedure") {
  PiecewisePolyDensity s = make_density({1, 2}, {Polynomial({-3, 2})}, true);
  CHECK_THROWS_AS(decide_piecewise(s, uniform_density(1, 2)), InputError);
}

}  // TEST_SUITE
