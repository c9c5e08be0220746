#pragma once

#include <optional>
#include <vector>

#include "momtail/rational.hpp"

namespace momtail {

using Vector = std::vector<Rational>;
using Matrix = std::vector<Vector>;

/// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> row_reduce(Matrix& m);
std::size_t rank(Matrix m);

/// Unique solution of a square system, or nullopt when singular.
std::optional<Vector> solve_square(Matrix a, Vector rhs);

}  // namespace momtail
