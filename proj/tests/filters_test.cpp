#include <doctest.h>

#include "momtail/filters.hpp"
#include "support.hpp"

using namespace momtail;
using test::q;

namespace {

using Set = StructuredSet;
using test::random_set;
using test::RandomSet;

bool in_some_atom(const Set& s, std::uint64_t n) {
  for (const auto& atom : s.atoms()) {
    for (std::uint64_t v = atom.c; v <= n; v *= atom.r)
      if (v == n) return true;
  }
  return false;
}

Rational partial_theta(const Set& s, std::uint64_t limit) {
  Rational sum = 0;
  for (auto n : s.elements_below(limit))
    if (n >= 1) sum += Rational(1, n);
  return sum;
}

}  // namespace

TEST_SUITE("filters") {

TEST_CASE("theta on elementary sets") {
  CHECK(theta(Set::from(1)).diverges);
  ThetaResult small = theta(Set::finite({2, 3, 5}));
  CHECK_FALSE(small.diverges);
  CHECK(small.value == q("31/30"));
  CHECK(theta(Set::progression(0, 2)).diverges);
  CHECK(theta(Set::geometric(1, 2)).value == 2);
  CHECK(theta(Set::geometric(3, 2)).value == q("2/3"));
  CHECK(theta(Set::geometric(1, 3)).value == q("3/2"));
  // 0 carries no weight.
  CHECK(theta(Set::finite({0, 4})).value == q("1/4"));
  // Powers of 2 that are also powers of 4 are counted once.
  CHECK(theta(Set::geometric(1, 2) | Set::geometric(1, 4)).value == 2);
  CHECK(theta(Set::geometric(1, 2) & Set::geometric(1, 4)).value == q("4/3"));
  CHECK(theta(Set::geometric(1, 2) - Set::geometric(1, 4)).value == q("2/3"));
  CHECK(theta(Set::geometric(1, 6) & Set::geometric(1, 2)).value == 1);  // only {1}
}

TEST_CASE("filter membership examples") {
  Set cofinite = Set::naturals() - Set::finite({0, 3, 9});
  CHECK(in_frechet(cofinite));
  CHECK(in_msz_filter(cofinite));
  Set no_powers = Set::geometric(1, 2).complement();
  CHECK_FALSE(in_frechet(no_powers));
  CHECK(in_msz_filter(no_powers));
  Set odds = Set::progression(1, 2);
  CHECK_FALSE(in_frechet(odds));
  CHECK_FALSE(in_msz_filter(odds));
}

TEST_CASE("Muntz-Szasz sequences") {
  CHECK(is_msz_sequence(Set::from(7)).kind == MszVerdict::Kind::Certified);
  MszVerdict powers = is_msz_sequence(Set::geometric(1, 2));
  CHECK(powers.kind == MszVerdict::Kind::NotMSz);
  CHECK(powers.partial_sum == 2);

  std::vector<std::uint64_t> prefix;
  for (std::uint64_t n = 10; n <= 20; ++n) prefix.push_back(n);
  for (std::uint64_t n = 30; n <= 60; ++n) prefix.push_back(n);
  MszVerdict ok = is_msz_sequence(prefix, {{10, 20}, {30, 60}});
  CHECK(ok.kind == MszVerdict::Kind::Certified);
  CHECK(ok.runs == 2);
  CHECK(is_msz_sequence(prefix, {}).kind == MszVerdict::Kind::UndecidedPrefix);
  // A run outside the prefix, overlapping runs, or a short run is rejected.
  CHECK(is_msz_sequence(prefix, {{10, 25}}).kind == MszVerdict::Kind::UndecidedPrefix);
  CHECK(is_msz_sequence(prefix, {{10, 20}, {15, 20}}).kind == MszVerdict::Kind::UndecidedPrefix);
  CHECK(is_msz_sequence(prefix, {{30, 40}}).kind == MszVerdict::Kind::UndecidedPrefix);
  CHECK_THROWS_AS(is_msz_sequence(std::vector<std::uint64_t>{3, 2}, {}), InputError);
}

TEST_CASE("finite intersection property") {
  FipResult parity = has_fip({Set::progression(0, 2), Set::progression(1, 2)});
  CHECK_FALSE(parity.holds);
  CHECK(parity.witness == std::vector<std::size_t>{0, 1});
  FipResult fast = has_fip({Set::from(1), Set::from(2), Set::progression(0, 2)});
  CHECK(fast.holds);
  CHECK(fast.fast_path);
  FipResult slow = has_fip({Set::progression(0, 2), Set::progression(0, 3), Set::geometric(1, 2).complement()});
  CHECK(slow.holds);
  CHECK_FALSE(slow.fast_path);
  FipResult three = has_fip({Set::progression(0, 2), Set::progression(0, 3), Set::from(1), Set::finite({1, 5, 7})});
  CHECK_FALSE(three.holds);
  // The witness is itself a family with empty intersection.
  Set meet = Set::naturals();
  std::vector<Set> fam{Set::progression(0, 2), Set::progression(0, 3), Set::from(1), Set::finite({1, 5, 7})};
  for (auto i : three.witness) meet = meet & fam[i];
  CHECK(meet.is_empty());
  std::vector<Set> many;
  for (int i = 0; i < 5; ++i) many.push_back(Set::progression(i, 5));
  CHECK_THROWS_AS(has_fip(many, 3), SizeBoundExceeded);
}

TEST_CASE("expression parser") {
  Set s = parse_set_expression("(ap 3 4) ∪ {1,2} ∖ {7}");
  CHECK(s.elements_below(20) == std::vector<std::uint64_t>{1, 2, 3, 11, 15, 19});
  CHECK(parse_set_expression("complement(geom 1 2)") == Set::geometric(1, 2).complement());
  CHECK(parse_set_expression("ap 0 2 & ap 0 3") == Set::progression(0, 6));
  CHECK(parse_set_expression("N \\ from 4") == Set::finite({0, 1, 2, 3}));
  CHECK(parse_set_expression("empty | {}") == Set::empty());
  CHECK_THROWS_AS(parse_set_expression("ap 3"), InputError);
  CHECK_THROWS_AS(parse_set_expression("apple"), InputError);
  CHECK_THROWS_AS(parse_set_expression("{1,2"), InputError);
  CHECK_THROWS_AS(parse_set_expression("geom 1 1"), InputError);
}

TEST_CASE("set operations agree with pointwise membership") {
  test::Gen gen(41);
  for (int trial = 0; trial < 80; ++trial) {
    RandomSet a = random_set(gen), b = random_set(gen);
    Set u = a.set | b.set, i = a.set & b.set, d = a.set - b.set, c = a.set.complement();
    for (std::uint64_t n = 0; n < 400; ++n) {
      bool x = a.set.contains(n), y = b.set.contains(n);
      CHECK(u.contains(n) == (x || y));
      CHECK(i.contains(n) == (x && y));
      CHECK(d.contains(n) == (x && !y));
      CHECK(c.contains(n) == !x);
    }
    CHECK(c.complement() == a.set);
    CHECK((a.set | a.set) == a.set);
    CHECK(parse_set_expression(a.text) == a.set);
  }
}

TEST_CASE("theta agrees with brute-force partial sums") {
  test::Gen gen(42);
  const std::uint64_t limit = 1 << 16;
  int converging = 0;
  for (int trial = 0; trial < 80; ++trial) {
    RandomSet a = random_set(gen);
    ThetaResult t = theta(a.set);
    if (t.diverges) {
      // The reported residue class, minus the geometric atoms, lies inside the set.
      std::uint64_t n = t.from;
      while (n % t.modulus != t.residue % t.modulus) ++n;
      for (int steps = 0; steps < 50; ++steps, n += t.modulus)
        if (!in_some_atom(a.set, n)) CHECK(a.set.contains(n));
      continue;
    }
    ++converging;
    Rational partial = partial_theta(a.set, limit);
    CHECK(partial <= t.value);
    CHECK(t.value - partial <= ratio(2 * static_cast<long>(a.set.atoms().size()) + 2, limit));
  }
  CHECK(converging > 10);
}

TEST_CASE("theta is additive on disjoint convergent sets") {
  test::Gen gen(43);
  int checked = 0;
  for (int trial = 0; trial < 120 && checked < 25; ++trial) {
    Set a = random_set(gen).set, b = random_set(gen).set - a;
    ThetaResult ta = theta(a), tb = theta(b);
    if (ta.diverges || tb.diverges) continue;
    CHECK(theta(a | b).value == ta.value + tb.value);
    ++checked;
  }
  CHECK(checked == 25);
}

TEST_CASE("filter laws on random sets") {
  test::Gen gen(44);
  for (int trial = 0; trial < 100; ++trial) {
    Set a = random_set(gen).set, b = random_set(gen).set;
    if (in_frechet(a)) CHECK(in_msz_filter(a));
    for (auto member : {in_frechet, in_msz_filter}) {
      if (member(a)) CHECK(member(a | b));
      if (member(a) && member(b)) CHECK(member(a & b));
    }
    CHECK(in_frechet(a) == a.complement().is_finite());
    CHECK(in_msz_filter(a) == !theta(a.complement()).diverges);
  }
}

}  // TEST_SUITE
