#include "momtail/linalg.hpp"

#include "momtail/errors.hpp"

namespace momtail {

std::vector<std::size_t> row_reduce(Matrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Rational inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank(Matrix m) { return row_reduce(m).size(); }

std::optional<Vector> solve_square(Matrix a, Vector rhs) {
  const std::size_t n = a.size();
  if (rhs.size() != n) throw InputError("dimension mismatch in linear solve");
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw InputError("linear solve needs a square matrix");
    a[i].push_back(rhs[i]);
  }
  auto pivots = row_reduce(a);
  if (pivots.size() != n || (n > 0 && pivots.back() != n - 1)) return std::nullopt;
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n];
  return x;
}

}  // namespace momtail
