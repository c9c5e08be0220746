#include "momtail/games.hpp"

#include <algorithm>

#include "momtail/errors.hpp"

namespace momtail {

LexOrder lex_compare(const ProbVector& p, const ProbVector& q) {
  if (p.size() != q.size()) throw InputError("lex comparison needs vectors of equal length");
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] < q[i]) return LexOrder::Less;
    if (p[i] > q[i]) return LexOrder::Greater;
  }
  return LexOrder::Equal;
}

namespace {

void require_simplex(const Vector& v, std::size_t size, const char* what) {
  if (v.size() != size) throw InputError(std::string(what) + " has the wrong length");
  Rational total = 0;
  for (const auto& x : v) {
    if (x < 0) throw InputError(std::string(what) + " has a negative entry");
    total += x;
  }
  if (total != 1) throw InputError(std::string(what) + " does not sum to 1");
}

// Highest 1-based coordinate where p and q differ, 0 when equal.
std::size_t decisive_coordinate(const ProbVector& p, const ProbVector& q) {
  for (std::size_t i = p.size(); i-- > 0;)
    if (p[i] != q[i]) return i + 1;
  return 0;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a[0].size(), Vector(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

// Vertices of {(x, v) : x in simplex, (B x)_j >= v for all j} attaining the
// largest v. B is n x m, so x has m entries.
std::pair<Rational, std::vector<Vector>> maximin_vertices(const Matrix& b) {
  const std::size_t m = b[0].size(), n = b.size();
  const std::size_t ineqs = m + n;
  std::optional<Rational> best;
  std::vector<Vector> optimal;
  std::vector<bool> pick(ineqs, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(m), true);
  do {
    // Unknowns x_0..x_{m-1}, v.
    Matrix sys;
    Vector rhs;
    Vector eq(m + 1, Rational(1));
    eq[m] = 0;
    sys.push_back(eq);
    rhs.push_back(1);
    for (std::size_t k = 0; k < ineqs; ++k) {
      if (!pick[k]) continue;
      Vector row(m + 1, Rational(0));
      if (k < m) {
        row[k] = 1;
      } else {
        for (std::size_t i = 0; i < m; ++i) row[i] = b[k - m][i];
        row[m] = -1;
      }
      sys.push_back(std::move(row));
      rhs.push_back(0);
    }
    auto sol = solve_square(sys, rhs);
    if (!sol) continue;
    Vector x(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(m));
    const Rational v = (*sol)[m];
    bool feasible = std::all_of(x.begin(), x.end(), [](const Rational& t) { return t >= 0; });
    for (std::size_t j = 0; j < n && feasible; ++j) {
      Rational s = 0;
      for (std::size_t i = 0; i < m; ++i) s += b[j][i] * x[i];
      feasible = s >= v;
    }
    if (!feasible) continue;
    if (!best || v > *best) {
      best = v;
      optimal.clear();
    }
    if (v == *best && std::find(optimal.begin(), optimal.end(), x) == optimal.end()) optimal.push_back(x);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  std::sort(optimal.begin(), optimal.end());
  return {*best, optimal};
}

Matrix restrict_matrix(const Matrix& a, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  Matrix out;
  for (std::size_t i : rows) {
    Vector r;
    for (std::size_t j : cols) r.push_back(a[i][j]);
    out.push_back(std::move(r));
  }
  return out;
}

Vector restrict_vector(const Vector& v, const std::vector<std::size_t>& idx) {
  Vector out;
  for (std::size_t i : idx) out.push_back(v[i]);
  return out;
}

Vector embed(const Vector& v, const std::vector<std::size_t>& idx, std::size_t size) {
  Vector out(size, Rational(0));
  for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = v[k];
  return out;
}

bool profile_less(const MixedProfile& a, const MixedProfile& b) {
  auto ka = std::make_tuple(support_of(a.sigma1), support_of(a.sigma2));
  auto kb = std::make_tuple(support_of(b.sigma1), support_of(b.sigma2));
  if (ka != kb) return ka < kb;
  return std::tie(a.sigma1, a.sigma2) < std::tie(b.sigma1, b.sigma2);
}

}  // namespace

DistGame::DistGame(std::vector<std::vector<ProbVector>> payoff) : payoff_(std::move(payoff)) {
  if (payoff_.empty() || payoff_[0].empty()) throw InputError("game needs at least one row and one column");
  const std::size_t n = payoff_[0].size(), len = payoff_[0][0].size();
  if (len == 0) throw InputError("payoff vectors must be nonempty");
  for (const auto& row : payoff_) {
    if (row.size() != n) throw InputError("game payoff matrix is not rectangular");
    for (const auto& p : row) {
      if (p.size() != len) throw InputError("payoff vectors must share one support size");
      require_simplex(p, len, "payoff vector");
    }
  }
}

void validate_profile(const DistGame& g, const MixedProfile& v) {
  require_simplex(v.sigma1, g.rows(), "Player 1 strategy");
  require_simplex(v.sigma2, g.cols(), "Player 2 strategy");
}

Vector pure_strategy(std::size_t size, std::size_t index) {
  Vector v(size, Rational(0));
  v.at(index) = 1;
  return v;
}

std::vector<std::size_t> support_of(const Vector& sigma) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < sigma.size(); ++i)
    if (sigma[i] != 0) s.push_back(i);
  return s;
}

Matrix project(const DistGame& g, std::size_t i) {
  if (i < 1 || i > g.support()) throw InputError("projection coordinate out of range");
  Matrix a(g.rows(), Vector(g.cols()));
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = 0; c < g.cols(); ++c) a[r][c] = g.cell(r, c)[i - 1];
  return a;
}

ProbVector expected_payoff(const DistGame& g, const Vector& sigma1, const Vector& sigma2) {
  ProbVector out(g.support(), Rational(0));
  for (std::size_t r = 0; r < g.rows(); ++r) {
    if (sigma1[r] == 0) continue;
    for (std::size_t c = 0; c < g.cols(); ++c) {
      if (sigma2[c] == 0) continue;
      Rational w = sigma1[r] * sigma2[c];
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += w * g.cell(r, c)[k];
    }
  }
  return out;
}

Rational expected_value(const Matrix& a, const Vector& x, const Vector& y) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) s += x[i] * a[i][j] * y[j];
  return s;
}

std::vector<MixedProfile> ZeroSumSolution::equilibria() const {
  std::vector<MixedProfile> out;
  for (const auto& x : row_strategies)
    for (const auto& y : col_strategies) out.push_back({x, y});
  std::sort(out.begin(), out.end(), profile_less);
  return out;
}

ZeroSumSolution solve_zero_sum(const Matrix& a, std::size_t bound) {
  if (a.empty() || a[0].empty()) throw InputError("matrix game must be nonempty");
  for (const auto& row : a)
    if (row.size() != a[0].size()) throw InputError("matrix game is not rectangular");
  if (a.size() > bound || a[0].size() > bound) throw SizeBoundExceeded("matrix game exceeds the size bound");

  ZeroSumSolution s;
  // Row player: max over x of min_j (A^T x)_j.
  auto [v, xs] = maximin_vertices(transpose(a));
  // Column player: max over y of min_i (-A y)_i.
  Matrix neg = a;
  for (auto& row : neg)
    for (auto& t : row) t = -t;
  auto [w, ys] = maximin_vertices(neg);
  if (v != -w) throw Error("minimax values disagree; linear solve is inconsistent");
  s.value = v;
  s.row_strategies = std::move(xs);
  s.col_strategies = std::move(ys);
  s.continuum = s.row_strategies.size() > 1 || s.col_strategies.size() > 1;
  return s;
}

bool is_zero_sum_equilibrium(const Matrix& a, const Vector& x, const Vector& y) {
  const Rational value = expected_value(a, x, y);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (expected_value(a, pure_strategy(a.size(), i), y) > value) return false;
  for (std::size_t j = 0; j < a[0].size(); ++j)
    if (expected_value(a, x, pure_strategy(a[0].size(), j)) < value) return false;
  return true;
}

FaceChain lex_best_response(const DistGame& g, int player, const Vector& opponent) {
  if (player != 1 && player != 2) throw InputError("player must be 1 or 2");
  const std::size_t own = player == 1 ? g.rows() : g.cols();
  require_simplex(opponent, player == 1 ? g.cols() : g.rows(), "opponent strategy");
  std::vector<std::size_t> face(own);
  for (std::size_t i = 0; i < own; ++i) face[i] = i;
  FaceChain chain;
  for (std::size_t c = g.support(); c-- > 0;) {
    std::vector<Rational> u;
    for (std::size_t s : face) {
      Rational t = 0;
      for (std::size_t o = 0; o < opponent.size(); ++o)
        t += opponent[o] * (player == 1 ? g.cell(s, o)[c] : g.cell(o, s)[c]);
      u.push_back(t);
    }
    Rational best = player == 1 ? *std::max_element(u.begin(), u.end()) : *std::min_element(u.begin(), u.end());
    std::vector<std::size_t> next;
    for (std::size_t k = 0; k < face.size(); ++k)
      if (u[k] == best) next.push_back(face[k]);
    face = std::move(next);
    chain.faces.push_back(face);
  }
  return chain;
}

LexCheck check_lex_equilibrium(const DistGame& g, const MixedProfile& v) {
  validate_profile(g, v);
  LexCheck out;
  for (int player : {1, 2}) {
    const Vector& own = player == 1 ? v.sigma1 : v.sigma2;
    const Vector& other = player == 1 ? v.sigma2 : v.sigma1;
    FaceChain chain = lex_best_response(g, player, other);
    const auto& best = chain.best();
    bool inside = true;
    for (std::size_t s : support_of(own)) inside = inside && std::binary_search(best.begin(), best.end(), s);
    if (inside) continue;
    Deviation d;
    d.player = player;
    d.strategy = pure_strategy(own.size(), best.front());
    d.current = expected_payoff(g, v.sigma1, v.sigma2);
    d.deviating = player == 1 ? expected_payoff(g, d.strategy, v.sigma2) : expected_payoff(g, v.sigma1, d.strategy);
    d.decisive = decisive_coordinate(d.current, d.deviating);
    out.deviation = std::move(d);
    return out;
  }
  out.equilibrium = true;
  return out;
}

namespace {

LevelRecord level_below(const DistGame& g, const MixedProfile& candidate, std::size_t bound) {
  LevelRecord rec;
  rec.coordinate = g.support() - 1;
  const auto rows = support_of(candidate.sigma1), cols = support_of(candidate.sigma2);
  Matrix sub = restrict_matrix(project(g, rec.coordinate), rows, cols);
  ZeroSumSolution s = solve_zero_sum(sub, bound);
  rec.continuum = s.continuum;
  for (const auto& e : s.equilibria())
    rec.equilibria.push_back({embed(e.sigma1, rows, g.rows()), embed(e.sigma2, cols, g.cols())});
  rec.candidate_survives =
      is_zero_sum_equilibrium(sub, restrict_vector(candidate.sigma1, rows), restrict_vector(candidate.sigma2, cols));
  return rec;
}

}  // namespace

EquilibriumReport analyze_existence(const DistGame& g, std::size_t bound) {
  if (g.rows() > bound || g.cols() > bound)
    return Inconclusive{Inconclusive::Reason::SizeBound,
                        "game is " + std::to_string(g.rows()) + "x" + std::to_string(g.cols()) + ", bound " +
                            std::to_string(bound)};
  const std::size_t n = g.support();
  ZeroSumSolution top = solve_zero_sum(project(g, n), bound);
  if (top.continuum)
    return Inconclusive{Inconclusive::Reason::EquilibriumContinuum,
                        "coordinate " + std::to_string(n) + " game has a continuum of equilibria"};

  NoEquilibrium none;
  none.top = n;
  none.top_value = top.value;
  for (const auto& candidate : top.equilibria()) {
    LexCheck check = check_lex_equilibrium(g, candidate);
    if (check.equilibrium)
      return EquilibriumFound{candidate, lex_best_response(g, 1, candidate.sigma2),
                              lex_best_response(g, 2, candidate.sigma1)};
    CandidateCertificate cert;
    cert.candidate = candidate;
    if (n >= 2) cert.level = level_below(g, candidate, bound);
    cert.deviation = std::move(*check.deviation);
    none.candidates.push_back(std::move(cert));
  }
  return none;
}

namespace {

bool verify_deviation(const DistGame& g, const MixedProfile& v, const Deviation& d) {
  const std::size_t size = d.player == 1 ? g.rows() : g.cols();
  if (d.player != 1 && d.player != 2) return false;
  try {
    require_simplex(d.strategy, size, "deviation");
  } catch (const InputError&) {
    return false;
  }
  if (expected_payoff(g, v.sigma1, v.sigma2) != d.current) return false;
  ProbVector dev = d.player == 1 ? expected_payoff(g, d.strategy, v.sigma2) : expected_payoff(g, v.sigma1, d.strategy);
  if (dev != d.deviating) return false;
  if (decisive_coordinate(d.current, d.deviating) != d.decisive) return false;
  const LexOrder want = d.player == 1 ? LexOrder::Greater : LexOrder::Less;
  return lex_compare(d.deviating, d.current) == want;
}

}  // namespace

bool verify_report(const DistGame& g, const EquilibriumReport& report, std::size_t bound) {
  if (const auto* found = std::get_if<EquilibriumFound>(&report)) {
    try {
      validate_profile(g, found->profile);
    } catch (const InputError&) {
      return false;
    }
    return check_lex_equilibrium(g, found->profile).equilibrium &&
           lex_best_response(g, 1, found->profile.sigma2).faces == found->row_chain.faces &&
           lex_best_response(g, 2, found->profile.sigma1).faces == found->col_chain.faces;
  }
  if (const auto* none = std::get_if<NoEquilibrium>(&report)) {
    if (none->top != g.support()) return false;
    ZeroSumSolution top = solve_zero_sum(project(g, none->top), bound);
    if (top.continuum || top.value != none->top_value) return false;
    auto all = top.equilibria();
    if (all.size() != none->candidates.size()) return false;
    for (std::size_t k = 0; k < all.size(); ++k) {
      const auto& cert = none->candidates[k];
      if (!(cert.candidate == all[k])) return false;
      if (!verify_deviation(g, cert.candidate, cert.deviation)) return false;
      if (cert.level) {
        if (none->top < 2) return false;
        LevelRecord again = level_below(g, cert.candidate, bound);
        if (again.coordinate != cert.level->coordinate || again.continuum != cert.level->continuum ||
            again.candidate_survives != cert.level->candidate_survives ||
            again.equilibria != cert.level->equilibria)
          return false;
      } else if (none->top >= 2) {
        return false;
      }
    }
    return true;
  }
  const auto& inc = std::get<Inconclusive>(report);
  EquilibriumReport again = analyze_existence(g, bound);
  const auto* other = std::get_if<Inconclusive>(&again);
  return other && other->reason == inc.reason;
}

}  // namespace momtail
