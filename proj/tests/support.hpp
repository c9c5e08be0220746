#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <string_view>

#include "momtail/errors.hpp"
#include "momtail/filters.hpp"
#include "momtail/measures.hpp"

namespace test {

using momtail::Rational;
using momtail::ratio;

inline Rational q(std::string_view text) { return momtail::parse_rational(text); }

// Seeded source for the hand-rolled generators below; every property test
// names its own seed so failures reproduce.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  Rational fraction(long lo, long hi, long den) { return ratio(integer(lo * den, hi * den), den); }

  /// Strictly increasing breakpoints lo = x_0 < ... < x_m = hi on a grid of 1/den.
  std::vector<Rational> breakpoints(const Rational& lo, const Rational& hi, int pieces, long den) {
    std::vector<Rational> out{lo};
    for (int i = 1; i < pieces; ++i) {
      Rational next = out.back() + ratio(integer(1, 3), den);
      if (next >= hi) break;
      out.push_back(next);
    }
    out.push_back(hi);
    return out;
  }

  /// Continuous piecewise-linear nonnegative density with node values in
  /// {0, 1/10, ..., 1} (not all zero).
  momtail::PiecewisePolyDensity piecewise_linear(const Rational& lo, const Rational& hi, int pieces, long den) {
    auto bps = breakpoints(lo, hi, pieces, den);
    std::vector<Rational> values;
    for (std::size_t i = 0; i < bps.size(); ++i) values.push_back(ratio(integer(0, 10), 10));
    if (std::all_of(values.begin(), values.end(), [](const Rational& v) { return v == 0; })) values.back() = 1;
    std::vector<momtail::Polynomial> pieces_out;
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
      Rational slope = (values[i + 1] - values[i]) / (bps[i + 1] - bps[i]);
      Rational intercept = values[i] - slope * bps[i];
      pieces_out.push_back(momtail::Polynomial({intercept, slope}));
    }
    return momtail::make_density(bps, pieces_out);
  }

  /// Random polynomial with small integer coefficients.
  momtail::Polynomial polynomial(int degree, long bound) {
    std::vector<Rational> c;
    for (int i = 0; i <= degree; ++i) c.push_back(integer(-bound, bound));
    return momtail::Polynomial(c);
  }

 private:
  std::mt19937_64 rng_;
};

struct RandomSet {
  momtail::StructuredSet set;
  std::string text;
};

// Leaves are progressions, finite sets, tails and geometric sets; inner nodes
// are the four set operations. Geometric leaves are capped so tables stay small.
inline RandomSet random_set(Gen& gen, int depth, int& geometric_budget) {
  if (depth == 0 || gen.integer(0, 3) == 0) {
    switch (gen.integer(0, 4)) {
      case 0: {
        auto a = gen.integer(0, 20), d = gen.integer(1, 6);
        return {momtail::StructuredSet::progression(a, d), "ap " + std::to_string(a) + " " + std::to_string(d)};
      }
      case 1: {
        std::vector<std::uint64_t> els;
        std::string text = "{";
        for (long i = gen.integer(0, 5); i > 0; --i) {
          els.push_back(gen.integer(0, 40));
          text += (text.size() > 1 ? "," : "") + std::to_string(els.back());
        }
        return {momtail::StructuredSet::finite(els), text + "}"};
      }
      case 2: {
        auto n = gen.integer(0, 30);
        return {momtail::StructuredSet::from(n), "from " + std::to_string(n)};
      }
      default: {
        if (geometric_budget == 0) return {momtail::StructuredSet::from(5), "from 5"};
        --geometric_budget;
        auto c = gen.integer(1, 5), r = gen.integer(2, 4);
        return {momtail::StructuredSet::geometric(c, r), "geom " + std::to_string(c) + " " + std::to_string(r)};
      }
    }
  }
  RandomSet a = random_set(gen, depth - 1, geometric_budget);
  switch (gen.integer(0, 3)) {
    case 0: {
      RandomSet b = random_set(gen, depth - 1, geometric_budget);
      return {a.set | b.set, "(" + a.text + ") | (" + b.text + ")"};
    }
    case 1: {
      RandomSet b = random_set(gen, depth - 1, geometric_budget);
      return {a.set & b.set, "(" + a.text + ") & (" + b.text + ")"};
    }
    case 2: {
      RandomSet b = random_set(gen, depth - 1, geometric_budget);
      return {a.set - b.set, "(" + a.text + ") \\ (" + b.text + ")"};
    }
    default:
      return {a.set.complement(), "complement(" + a.text + ")"};
  }
}

inline RandomSet random_set(Gen& gen) {
  int budget = 2;
  return random_set(gen, 3, budget);
}

}  // namespace test
