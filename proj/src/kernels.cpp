#include <algorithm>
#include <cmath>
#include <set>

#include "momtail/constructions.hpp"
#include "momtail/errors.hpp"
#include "momtail/linalg.hpp"
#include "momtail/moment_sweep.hpp"

namespace momtail {

namespace {

std::vector<std::pair<Rational, Rational>> kernel_supports(const Rational& a, const Rational& b, std::size_t count,
                                                           bool perturbed) {
  Rational w = (b - a) / static_cast<unsigned long>(count);
  Rational shift = perturbed ? w / 7 : Rational(0);
  std::vector<std::pair<Rational, Rational>> out;
  for (std::size_t i = 0; i < count; ++i) {
    Rational cell = a + w * static_cast<unsigned long>(i) + shift;
    out.emplace_back(cell + w / 4, cell + 3 * w / 4);
  }
  return out;
}

std::optional<VanishingKernel> try_kernel(const Rational& a, const Rational& b, const std::vector<unsigned long>& orders,
                                          const BumpSpec& spec, bool perturbed, const PrecisionBudget& budget) {
  const std::size_t n = orders.size() + 1;
  auto supports = kernel_supports(a, b, n, perturbed);
  std::vector<Polynomial> bumps;
  for (const auto& [l, r] : supports) bumps.push_back(peak_bump(l, r, spec.degree));

  Matrix lhs(orders.size(), Vector(n - 1));
  Vector rhs(orders.size());
  for (std::size_t row = 0; row < orders.size(); ++row) {
    for (std::size_t i = 0; i < n; ++i) {
      Rational entry = bumps[i].integrate_times_power(supports[i].first, supports[i].second, orders[row]);
      budget.check(entry, "kernel moment matrix");
      if (i + 1 < n)
        lhs[row][i] = entry;
      else
        rhs[row] = -entry;
    }
  }
  auto sol = solve_square(lhs, rhs);
  if (!sol) return std::nullopt;

  VanishingKernel k;
  k.coefficients = *sol;
  k.coefficients.push_back(1);
  Rational sup = 0;
  for (const auto& c : k.coefficients) sup = std::max(sup, abs_value(c));
  for (auto& c : k.coefficients) c /= sup;
  if (k.coefficients.back() < 0)
    for (auto& c : k.coefficients) c = -c;

  std::vector<PlacedBump> placed;
  for (std::size_t i = 0; i < n; ++i)
    placed.push_back({supports[i].first, supports[i].second, bumps[i] * k.coefficients[i]});
  k.density = assemble_bumps(a, b, std::move(placed), true);
  k.vanished_orders = orders;
  k.supports = supports;
  k.x0 = (supports.back().first + supports.back().second) / 2;
  k.perturbed = perturbed;

  // A kernel that also kills the next order signals a degenerate grid.
  if (moment(k.density, orders.back() + 1, budget).value == 0) return std::nullopt;
  return k;
}

}  // namespace

VanishingKernel kernel_for_orders(const Rational& a, const Rational& b, std::vector<unsigned long> orders,
                                  const BumpSpec& spec, const PrecisionBudget& budget) {
  if (!(a > 0 && a < b)) throw InputError("kernel needs 0 < a < b");
  if (spec.mode != BumpSpec::Mode::ExactPolynomial)
    throw InputError("exact kernels need polynomial bumps; use smooth_vanishing_kernel for the smooth mode");
  if (spec.degree < 2) throw InputError("bump degree must be at least 2");
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
  if (orders.empty()) throw InputError("kernel needs at least one order");

  for (bool perturbed : {false, true})
    if (auto k = try_kernel(a, b, orders, spec, perturbed, budget)) return *k;
  throw ConstructionFailure("kernel degenerate on both the default and the perturbed grid");
}

VanishingKernel vanishing_moment_kernel(const Rational& a, const Rational& b, unsigned long n, const BumpSpec& spec,
                                        const PrecisionBudget& budget) {
  std::vector<unsigned long> orders(n + 1);
  for (unsigned long k = 0; k <= n; ++k) orders[k] = k;
  return kernel_for_orders(a, b, std::move(orders), spec, budget);
}

// ---------------------------------------------------------------------------

namespace {

// Nodes and weights of the m-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(unsigned m, std::vector<long double>& nodes, std::vector<long double>& weights) {
  nodes.assign(m, 0);
  weights.assign(m, 0);
  const long double pi = 3.14159265358979323846264338327950288L;
  for (unsigned i = 0; i < m; ++i) {
    long double x = std::cos(pi * (i + 0.75L) / (m + 0.5L));
    long double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1, p1 = x;
      for (unsigned k = 2; k <= m; ++k) {
        long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1);
      long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    nodes[i] = x;
    weights[i] = 2 / ((1 - x * x) * dp * dp);
  }
}

long double smooth_bump(long double x, long double l, long double r) {
  if (x <= l || x >= r) return 0;
  long double h = (r - l) / 2;
  // Peak value 1 at the midpoint.
  return std::exp(1 / (h * h) - 1 / ((x - l) * (r - x)));
}

}  // namespace

SmoothKernelReport smooth_vanishing_kernel(double a, double b, unsigned long n, const BumpSpec& spec) {
  if (!(a > 0 && a < b)) throw InputError("kernel needs 0 < a < b");
  const std::size_t count = n + 2;
  const long double w = (static_cast<long double>(b) - a) / count;
  std::vector<long double> nodes, weights;
  gauss_legendre(20, nodes, weights);
  // Fixed panel count per bump; tight tolerances get more panels.
  const unsigned panels = spec.tolerance < 1e-9 ? 64 : 16;

  auto integrate = [&](std::size_t bump, unsigned long k) {
    long double l = a + w * bump + w / 4, r = a + w * bump + 3 * w / 4;
    long double width = (r - l) / panels, total = 0;
    for (unsigned p = 0; p < panels; ++p) {
      long double lo = l + width * p, mid = lo + width / 2;
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        long double x = mid + width / 2 * nodes[q];
        total += weights[q] * width / 2 * smooth_bump(x, l, r) * std::pow(x, static_cast<long double>(k));
      }
    }
    return total;
  };

  std::vector<std::vector<long double>> m(n + 1, std::vector<long double>(count));
  for (unsigned long k = 0; k <= n; ++k)
    for (std::size_t i = 0; i < count; ++i) m[k][i] = integrate(i, k);

  // Gaussian elimination with partial pivoting; last coefficient fixed at 1.
  std::vector<long double> c(count, 0);
  c[count - 1] = 1;
  std::vector<std::vector<long double>> aug(n + 1, std::vector<long double>(count));
  for (unsigned long k = 0; k <= n; ++k) {
    for (std::size_t i = 0; i + 1 < count; ++i) aug[k][i] = m[k][i];
    aug[k][count - 1] = -m[k][count - 1];
  }
  const std::size_t dim = n + 1;
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < dim; ++r)
      if (std::fabs(aug[r][col]) > std::fabs(aug[piv][col])) piv = r;
    std::swap(aug[piv], aug[col]);
    for (std::size_t r = 0; r < dim; ++r) {
      if (r == col) continue;
      long double f = aug[r][col] / aug[col][col];
      for (std::size_t j = col; j < count; ++j) aug[r][j] -= f * aug[col][j];
    }
  }
  for (std::size_t i = 0; i < dim; ++i) c[i] = aug[i][count - 1] / aug[i][i];
  long double sup = 0;
  for (auto v : c) sup = std::max(sup, std::fabs(v));

  SmoothKernelReport out;
  for (auto v : c) out.coefficients.push_back(static_cast<double>(v / sup));
  for (unsigned long k = 0; k <= n + 1; ++k) {
    long double s = 0;
    for (std::size_t i = 0; i < count; ++i) s += c[i] / sup * integrate(i, k);
    out.moments.push_back(static_cast<double>(s));
    if (k <= n) out.max_abs_vanished = std::max(out.max_abs_vanished, std::fabs(static_cast<double>(s)));
  }
  return out;
}

// ---------------------------------------------------------------------------

StagedKernel staged_vanishing_kernel(const Rational& a, const Rational& b, unsigned long stages, const BumpSpec& spec,
                                     const StagedOptions& options, const PrecisionBudget& budget) {
  if (!(a > 0 && a < b)) throw InputError("staged kernel needs 0 < a < b");
  if (stages < 1) throw InputError("staged kernel needs at least one stage");

  StagedKernel out;
  out.grid = options.grid;
  if (out.grid.empty()) {
    for (unsigned long i = 0; i <= stages + 1; ++i) out.grid.push_back(b - (b - a) / pow(Rational(2), i));
  }
  if (out.grid.size() < stages + 2) throw InputError("grid needs at least stages + 2 points");
  for (std::size_t i = 0; i < out.grid.size(); ++i) {
    if (out.grid[i] < a || out.grid[i] >= b) throw InputError("grid points must lie in [a, b)");
    if (i > 0 && !(out.grid[i - 1] < out.grid[i])) throw InputError("grid must be strictly increasing");
  }

  out.exponents = {1};
  std::vector<PlacedBump> placed;
  PiecewisePolyDensity h = assemble_bumps(a, b, {}, true);
  bool h_zero = true;

  for (unsigned long n = 0; n < stages; ++n) {
    const Rational& l = out.grid[n + 1];
    const Rational& r = out.grid[n + 2];
    std::vector<unsigned long> orders{0};
    orders.insert(orders.end(), out.exponents.begin(), out.exponents.end());
    const unsigned long k_n = out.exponents.back();

    StageRecord rec;
    VanishingKernel kernel;
    if (h_zero) {
      // Zero numerator: a_l = 0 at l = k_n + 1. Building that order into the
      // kernel keeps the stage nontrivial.
      rec.exponent = k_n + 1;
      rec.ratio = 0;
      rec.scale = 1;
      rec.searched = 1;
      orders.push_back(rec.exponent);
      kernel = kernel_for_orders(l, r, orders, spec, budget);
    } else {
      kernel = kernel_for_orders(l, r, orders, spec, budget);
      MomentSweep num(h, k_n + 1), den(kernel.density, k_n + 1);
      bool found = false;
      for (unsigned long step = 0; step < options.ell_search_cap; ++step) {
        if (step > 0) {
          num.advance();
          den.advance();
        }
        if (den.sign() != 0 && compare_magnitude(num, den) < 0) {
          found = true;
          rec.searched = step + 1;
          break;
        }
      }
      if (!found)
        throw ConstructionFailure("stage " + std::to_string(n + 1) + ": no l in (" + std::to_string(k_n) + ", " +
                                  std::to_string(k_n + options.ell_search_cap) + "] with |a_l| < 1");
      rec.exponent = num.order();
      rec.ratio = num.value() / den.value();
      rec.scale = -rec.ratio;
    }
    rec.kernel_orders = orders;
    for (std::size_t i = 0; i < kernel.supports.size(); ++i) {
      Rational coef = kernel.coefficients[i] * rec.scale;
      placed.push_back({kernel.supports[i].first, kernel.supports[i].second,
                        peak_bump(kernel.supports[i].first, kernel.supports[i].second, spec.degree) * coef});
      out.sup_norm = std::max(out.sup_norm, abs_value(coef));
    }
    h = assemble_bumps(a, b, placed, true);
    h_zero = out.sup_norm == 0;
    out.exponents.push_back(rec.exponent);
    out.stages.push_back(std::move(rec));
  }
  out.density = std::move(h);

  for (unsigned long k : out.exponents)
    if (moment(out.density, k, budget).value != 0)
      throw ConstructionFailure("staged kernel moment " + std::to_string(k) + " does not vanish");
  if (moment(out.density, 0, budget).value != 0) throw ConstructionFailure("staged kernel integral is not zero");
  return out;
}

MatchedPair matched_moment_pair(const Rational& a, const Rational& b, unsigned long stages, const BumpSpec& spec,
                                const StagedOptions& options, const PrecisionBudget& budget) {
  if (stages < 1) throw InputError("matched pair needs at least one stage (h = 0 would give f1 = f2)");
  if (!(a > 0 && a < b)) throw InputError("matched pair needs 0 < a < b");
  MatchedPair out;
  Polynomial base = unit_mass_bump(a, b, spec.degree);
  PiecewisePolyDensity g = make_density({a, b}, {base});
  out.c = a + (b - a) / 4;
  out.d = b - (b - a) / 4;
  out.epsilon = lower_bound_on(base, out.c, out.d);
  if (out.epsilon <= 0) throw ConstructionFailure("base density has no positive lower bound on [c, d]");

  out.kernel = staged_vanishing_kernel(out.c, out.d, stages, spec, options, budget);
  out.kernel_scale = out.epsilon / out.kernel.sup_norm;
  PiecewisePolyDensity h = scaled(out.kernel.density, out.kernel_scale);
  out.f1 = combine(1, g, -1, h);
  out.f2 = combine(1, g, 1, h);
  out.f1.is_signed = out.f2.is_signed = false;
  validate(out.f1);
  validate(out.f2);
  out.agreement.push_back(0);
  out.agreement.insert(out.agreement.end(), out.kernel.exponents.begin(), out.kernel.exponents.end());
  return out;
}

}  // namespace momtail
