#include <doctest.h>

#include "momtail/games.hpp"
#include "support.hpp"

using namespace momtail;
using test::q;

namespace {

DistGame table_game() {
  return DistGame({{{q("0.3"), q("0.2"), q("0.5")}, {q("0.6"), q("0.3"), q("0.1")}},
                   {{q("0.8"), q("0.1"), q("0.1")}, {q("0.3"), q("0.2"), q("0.5")}}});
}

Vector half() { return {Rational(1, 2), Rational(1, 2)}; }

// Lex-equilibrium test on a 2x2 game using pure deviations only: a mixed
// deviation improves only if some pure strategy in its support does.
bool brute_force_equilibrium(const DistGame& g, const Vector& x, const Vector& y) {
  ProbVector current = expected_payoff(g, x, y);
  for (std::size_t i = 0; i < g.rows(); ++i)
    if (lex_compare(expected_payoff(g, pure_strategy(g.rows(), i), y), current) == LexOrder::Greater) return false;
  for (std::size_t j = 0; j < g.cols(); ++j)
    if (lex_compare(expected_payoff(g, x, pure_strategy(g.cols(), j)), current) == LexOrder::Less) return false;
  return true;
}

ProbVector random_distribution(test::Gen& gen, std::size_t n, long den) {
  ProbVector p(n, 0);
  long left = den;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    long take = gen.integer(0, left);
    p[i] = ratio(take, den);
    left -= take;
  }
  p[n - 1] = ratio(left, den);
  return p;
}

DistGame random_game(test::Gen& gen, std::size_t rows, std::size_t cols, std::size_t n) {
  std::vector<std::vector<ProbVector>> cells(rows);
  for (auto& row : cells)
    for (std::size_t j = 0; j < cols; ++j) row.push_back(random_distribution(gen, n, 10));
  return DistGame(cells);
}

Matrix random_matrix(test::Gen& gen, std::size_t rows, std::size_t cols) {
  Matrix a(rows, Vector(cols));
  for (auto& row : a)
    for (auto& v : row) v = gen.integer(-5, 5);
  return a;
}

}  // namespace

TEST_SUITE("games") {

TEST_CASE("lexicographic order reads from the last coordinate") {
  CHECK(lex_compare({q("0.35"), q("0.25"), q("0.3")}, {q("0.5"), q("0.2"), q("0.3")}) == LexOrder::Greater);
  CHECK(lex_compare({0, 0, 1}, {1, 0, 0}) == LexOrder::Greater);
  CHECK(lex_compare({q("1/3"), q("2/3")}, {q("1/3"), q("2/3")}) == LexOrder::Equal);
  CHECK_THROWS_AS(lex_compare({1}, {0, 1}), InputError);

  test::Gen gen(51);
  for (int trial = 0; trial < 200; ++trial) {
    ProbVector p = random_distribution(gen, 3, 4), r = random_distribution(gen, 3, 4);
    LexOrder a = lex_compare(p, r), b = lex_compare(r, p);
    if (p == r) {
      CHECK(a == LexOrder::Equal);
    } else {
      CHECK(a != LexOrder::Equal);
      CHECK(a != b);
    }
  }
}

TEST_CASE("games validate their cells") {
  CHECK_THROWS_AS(DistGame({{{q("0.5"), q("0.4")}}}), InputError);
  CHECK_THROWS_AS(DistGame({{{1, 0}, {1}}}), InputError);
  CHECK_THROWS_AS(DistGame({}), InputError);
  CHECK_THROWS_AS(validate_profile(table_game(), {{1, 0}, {q("1/2"), q("1/3")}}), InputError);
}

TEST_CASE("projections of the table game") {
  DistGame g = table_game();
  CHECK(project(g, 1) == Matrix{{q("0.3"), q("0.6")}, {q("0.8"), q("0.3")}});
  CHECK(project(g, 2) == Matrix{{q("0.2"), q("0.3")}, {q("0.1"), q("0.2")}});
  CHECK(project(g, 3) == Matrix{{q("0.5"), q("0.1")}, {q("0.1"), q("0.5")}});
  CHECK_THROWS_AS(project(g, 4), InputError);
  CHECK_THROWS_AS(project(g, 0), InputError);
  DistGame single(std::vector<std::vector<ProbVector>>{{ProbVector{1}, ProbVector{1}}});
  CHECK(project(single, 1) == Matrix{{1, 1}});
}

TEST_CASE("expected payoffs are linear in the mixture") {
  test::Gen gen(52);
  for (int trial = 0; trial < 30; ++trial) {
    DistGame g = random_game(gen, 3, 2, 3);
    Vector x = random_distribution(gen, 3, 6), y = random_distribution(gen, 2, 6);
    ProbVector u = expected_payoff(g, x, y);
    for (std::size_t c = 1; c <= 3; ++c) CHECK(u[c - 1] == expected_value(project(g, c), x, y));
    ProbVector manual(3, 0);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t c = 0; c < 3; ++c) manual[c] += x[i] * y[j] * g.cell(i, j)[c];
    CHECK(u == manual);
  }
}

TEST_CASE("matrix games of the table") {
  DistGame g = table_game();
  ZeroSumSolution top = solve_zero_sum(project(g, 3));
  CHECK_FALSE(top.continuum);
  CHECK(top.row_strategies == std::vector<Vector>{half()});
  CHECK(top.col_strategies == std::vector<Vector>{half()});
  CHECK(top.value == q("0.3"));
  CHECK(expected_value(project(g, 3), half(), half()) == top.value);

  ZeroSumSolution second = solve_zero_sum(project(g, 2));
  CHECK_FALSE(second.continuum);
  CHECK(second.equilibria() == std::vector<MixedProfile>{{{1, 0}, {1, 0}}});
  CHECK(second.value == q("0.2"));

  ZeroSumSolution flat = solve_zero_sum(Matrix{{2, 2}, {2, 2}});
  CHECK(flat.continuum);
  CHECK(flat.value == 2);
  CHECK(flat.row_strategies.size() == 2);

  CHECK_THROWS_AS(solve_zero_sum(Matrix(7, Vector(2, 0))), SizeBoundExceeded);
}

TEST_CASE("zero-sum solutions guarantee the value against every pure reply") {
  test::Gen gen(53);
  for (int trial = 0; trial < 60; ++trial) {
    Matrix a = random_matrix(gen, gen.integer(1, 4), gen.integer(1, 4));
    ZeroSumSolution s = solve_zero_sum(a);
    REQUIRE_FALSE(s.row_strategies.empty());
    REQUIRE_FALSE(s.col_strategies.empty());
    for (const auto& x : s.row_strategies)
      for (std::size_t j = 0; j < a[0].size(); ++j)
        CHECK(expected_value(a, x, pure_strategy(a[0].size(), j)) >= s.value);
    for (const auto& y : s.col_strategies) {
      for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(expected_value(a, pure_strategy(a.size(), i), y) <= s.value);
      // Mass may move freely inside an equilibrium support.
      for (const auto& x : s.row_strategies)
        for (auto i : support_of(x)) CHECK(expected_value(a, pure_strategy(a.size(), i), y) == s.value);
    }
    CHECK(s.continuum == (s.row_strategies.size() > 1 || s.col_strategies.size() > 1));
    for (const auto& e : s.equilibria()) CHECK(is_zero_sum_equilibrium(a, e.sigma1, e.sigma2));
  }
}

TEST_CASE("lex best responses in the table game") {
  DistGame g = table_game();
  FaceChain vs_b1 = lex_best_response(g, 1, {1, 0});
  CHECK(vs_b1.best() == std::vector<std::size_t>{0});
  FaceChain vs_half = lex_best_response(g, 1, half());
  REQUIRE(vs_half.faces.size() >= 2);
  CHECK(vs_half.faces[0] == std::vector<std::size_t>{0, 1});
  CHECK(vs_half.faces[1] == std::vector<std::size_t>{0});
  CHECK(expected_payoff(g, {1, 0}, half())[1] == q("0.25"));
  CHECK(expected_payoff(g, {0, 1}, half())[1] == q("0.15"));
  DistGame lone({{{q("1/2"), q("1/2")}, {1, 0}}});
  CHECK(lex_best_response(lone, 1, half()).best() == std::vector<std::size_t>{0});
}

TEST_CASE("the mixed centre of the table game is refuted by a pure deviation") {
  DistGame g = table_game();
  LexCheck c = check_lex_equilibrium(g, {half(), half()});
  CHECK_FALSE(c.equilibrium);
  REQUIRE(c.deviation.has_value());
  CHECK(c.deviation->player == 1);
  CHECK(c.deviation->strategy == Vector{1, 0});
  CHECK(c.deviation->current == ProbVector{q("0.5"), q("0.2"), q("0.3")});
  CHECK(c.deviation->deviating == ProbVector{q("0.45"), q("0.25"), q("0.3")});
  CHECK(c.deviation->decisive == 2);
  CHECK(lex_compare(c.deviation->deviating, c.deviation->current) == LexOrder::Greater);
}

TEST_CASE("existence analysis of the table game") {
  DistGame g = table_game();
  EquilibriumReport r = analyze_existence(g);
  REQUIRE(std::holds_alternative<NoEquilibrium>(r));
  const auto& none = std::get<NoEquilibrium>(r);
  CHECK(none.top == 3);
  CHECK(none.top_value == q("0.3"));
  REQUIRE(none.candidates.size() == 1);
  const auto& cand = none.candidates[0];
  CHECK(cand.candidate == MixedProfile{half(), half()});
  REQUIRE(cand.level.has_value());
  CHECK(cand.level->coordinate == 2);
  CHECK(cand.level->equilibria == std::vector<MixedProfile>{{{1, 0}, {1, 0}}});
  CHECK_FALSE(cand.level->candidate_survives);
  CHECK(verify_report(g, r));

  NoEquilibrium forged = none;
  forged.candidates[0].deviation.deviating[1] = q("0.21");
  CHECK_FALSE(verify_report(g, EquilibriumReport{forged}));
  NoEquilibrium empty = none;
  empty.candidates.clear();
  CHECK_FALSE(verify_report(g, EquilibriumReport{empty}));
}

TEST_CASE("single-coordinate games reduce to matrix games") {
  DistGame g({{{1}, {1}}, {{1}, {1}}});
  // Constant payoff: every profile is optimal, so the top level is a continuum.
  CHECK(std::holds_alternative<Inconclusive>(analyze_existence(g)));

  // Two-outcome game whose top coordinate is matching pennies.
  DistGame pennies({{{0, 1}, {1, 0}}, {{1, 0}, {0, 1}}});
  EquilibriumReport r = analyze_existence(pennies);
  REQUIRE(std::holds_alternative<EquilibriumFound>(r));
  const auto& found = std::get<EquilibriumFound>(r);
  CHECK(found.profile == MixedProfile{half(), half()});
  CHECK(check_lex_equilibrium(pennies, found.profile).equilibrium);
  CHECK(verify_report(pennies, r));
}

TEST_CASE("a cell preferred by both players is the equilibrium") {
  DistGame g({{{q("1/2"), q("1/2")}, {q("1/4"), q("3/4")}}, {{q("3/4"), q("1/4")}, {q("1/2"), q("1/2")}}});
  EquilibriumReport r = analyze_existence(g);
  REQUIRE(std::holds_alternative<EquilibriumFound>(r));
  CHECK(std::get<EquilibriumFound>(r).profile == MixedProfile{{1, 0}, {1, 0}});
  CHECK(brute_force_equilibrium(g, {1, 0}, {1, 0}));
  CHECK(verify_report(g, r));
}

TEST_CASE("size bound yields an inconclusive report") {
  std::vector<std::vector<ProbVector>> cells(7, std::vector<ProbVector>(2, ProbVector{1}));
  EquilibriumReport r = analyze_existence(DistGame(cells));
  REQUIRE(std::holds_alternative<Inconclusive>(r));
  CHECK(std::get<Inconclusive>(r).reason == Inconclusive::Reason::SizeBound);
}

TEST_CASE("hierarchy verdicts survive a brute-force grid search") {
  test::Gen gen(54);
  const long den = 12;
  int decided = 0, refuted = 0;
  for (int trial = 0; trial < 60; ++trial) {
    DistGame g = random_game(gen, 2, 2, 2);
    EquilibriumReport r = analyze_existence(g);
    if (std::holds_alternative<Inconclusive>(r)) continue;
    ++decided;
    CHECK(verify_report(g, r));
    if (const auto* found = std::get_if<EquilibriumFound>(&r)) {
      CHECK(brute_force_equilibrium(g, found->profile.sigma1, found->profile.sigma2));
      continue;
    }
    ++refuted;
    for (long a = 0; a <= den; ++a)
      for (long b = 0; b <= den; ++b) {
        Vector x{ratio(a, den), ratio(den - a, den)}, y{ratio(b, den), ratio(den - b, den)};
        CHECK_FALSE(brute_force_equilibrium(g, x, y));
      }
  }
  CHECK(decided > 20);
  MESSAGE("decided ", decided, " random games, ", refuted, " without equilibrium");
}

}  // TEST_SUITE
