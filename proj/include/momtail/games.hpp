#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "momtail/linalg.hpp"
#include "momtail/rational.hpp"

namespace momtail {

/// Probability masses on {1, ..., N}; entry i - 1 is the mass at i.
using ProbVector = std::vector<Rational>;

enum class LexOrder { Less, Equal, Greater };

/// Compares from coordinate N down to 1; the first difference decides.
LexOrder lex_compare(const ProbVector& p, const ProbVector& q);

/// Two-player game whose cells are payoff distributions. Player 1 picks the
/// row and prefers lex-larger payoffs, Player 2 picks the column and prefers
/// lex-smaller ones.
class DistGame {
 public:
  /// Validates: nonempty, rectangular, every cell a probability vector of the
  /// same length.
  explicit DistGame(std::vector<std::vector<ProbVector>> payoff);

  std::size_t rows() const { return payoff_.size(); }
  std::size_t cols() const { return payoff_[0].size(); }
  std::size_t support() const { return payoff_[0][0].size(); }
  const ProbVector& cell(std::size_t i, std::size_t j) const { return payoff_[i][j]; }
  const std::vector<std::vector<ProbVector>>& payoff() const { return payoff_; }

 private:
  std::vector<std::vector<ProbVector>> payoff_;
};

struct MixedProfile {
  Vector sigma1;
  Vector sigma2;
  friend bool operator==(const MixedProfile&, const MixedProfile&) = default;
};

void validate_profile(const DistGame& g, const MixedProfile& v);
Vector pure_strategy(std::size_t size, std::size_t index);
std::vector<std::size_t> support_of(const Vector& sigma);

/// Payoff matrix of coordinate i (1-based).
Matrix project(const DistGame& g, std::size_t i);

ProbVector expected_payoff(const DistGame& g, const Vector& sigma1, const Vector& sigma2);
Rational expected_value(const Matrix& a, const Vector& x, const Vector& y);

struct ZeroSumSolution {
  Rational value;
  /// Extreme optimal strategies of each player, sorted.
  std::vector<Vector> row_strategies;
  std::vector<Vector> col_strategies;
  /// Some player has more than one optimal strategy.
  bool continuum = false;
  /// Every pairing of extreme strategies, sorted by supports.
  std::vector<MixedProfile> equilibria() const;
};

/// Row player maximizes x^T A y. Exact vertex enumeration of both optimal
/// strategy polytopes; throws SizeBoundExceeded beyond `bound` in either
/// dimension.
ZeroSumSolution solve_zero_sum(const Matrix& a, std::size_t bound = 6);

/// Exact equilibrium test for a matrix game: no pure deviation helps.
bool is_zero_sum_equilibrium(const Matrix& a, const Vector& x, const Vector& y);

/// faces[0] optimizes coordinate N, faces[1] then optimizes N - 1 on it, and so
/// on; faces.back() is the set of pure strategies spanning the lex-best
/// responses.
struct FaceChain {
  std::vector<std::vector<std::size_t>> faces;
  const std::vector<std::size_t>& best() const { return faces.back(); }
};

FaceChain lex_best_response(const DistGame& g, int player, const Vector& opponent);

struct Deviation {
  int player = 1;
  Vector strategy;
  ProbVector current;
  ProbVector deviating;
  /// Highest coordinate (1-based) where the two payoffs differ.
  std::size_t decisive = 0;
};

struct LexCheck {
  bool equilibrium = false;
  std::optional<Deviation> deviation;
};

LexCheck check_lex_equilibrium(const DistGame& g, const MixedProfile& v);

/// Equilibria of coordinate `coordinate` restricted to the candidate's
/// supports, embedded back into the full strategy spaces.
struct LevelRecord {
  std::size_t coordinate = 0;
  std::vector<MixedProfile> equilibria;
  bool continuum = false;
  bool candidate_survives = false;
};

struct CandidateCertificate {
  MixedProfile candidate;
  /// The next level below the top; empty when N = 1.
  std::optional<LevelRecord> level;
  Deviation deviation;
};

struct EquilibriumFound {
  MixedProfile profile;
  FaceChain row_chain;
  FaceChain col_chain;
};

struct NoEquilibrium {
  std::size_t top = 0;
  Rational top_value;
  std::vector<CandidateCertificate> candidates;
};

struct Inconclusive {
  enum class Reason { EquilibriumContinuum, SizeBound };
  Reason reason = Reason::EquilibriumContinuum;
  std::string detail;
};

using EquilibriumReport = std::variant<EquilibriumFound, NoEquilibrium, Inconclusive>;

/// Every lex-equilibrium is an equilibrium of the top projected game, so when
/// that game has finitely many equilibria each one is either confirmed or
/// refuted with an explicit improving deviation.
EquilibriumReport analyze_existence(const DistGame& g, std::size_t bound = 6);

bool verify_report(const DistGame& g, const EquilibriumReport& report, std::size_t bound = 6);

}  // namespace momtail
