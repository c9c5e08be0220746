#pragma once

#include <string>
#include <utility>
#include <vector>

#include "momtail/measures.hpp"
#include "momtail/tailorder.hpp"

namespace momtail {

// ---------------------------------------------------------------------------
// Bumps.

struct BumpSpec {
  enum class Mode { ExactPolynomial, SmoothQuadrature };
  Mode mode = Mode::ExactPolynomial;
  /// Polynomial bumps ((x - l)(r - x))^m are C^(m-1) at their endpoints.
  unsigned degree = 4;
  /// Absolute tolerance of the smooth-quadrature demo.
  double tolerance = 1e-12;
};

/// ((x - l)(r - x))^m scaled to peak value 1 at the midpoint.
Polynomial peak_bump(const Rational& l, const Rational& r, unsigned m);
/// ((x - l)(r - x))^m scaled to integral 1 over [l, r].
Polynomial unit_mass_bump(const Rational& l, const Rational& r, unsigned m);

/// weight * bump supported on [lo, hi]; `polynomial` already includes the weight.
struct PlacedBump {
  Rational lo;
  Rational hi;
  Polynomial polynomial;
};

/// Density on [a, b] made of disjoint placed bumps (zero elsewhere).
PiecewisePolyDensity assemble_bumps(const Rational& a, const Rational& b, std::vector<PlacedBump> bumps,
                                    bool is_signed);

// ---------------------------------------------------------------------------
// Vanishing-moment kernels.

struct VanishingKernel {
  PiecewisePolyDensity density;
  std::vector<unsigned long> vanished_orders;
  Rational x0;
  /// Coefficients of the peak-1 bumps, sup-norm 1, last one positive.
  std::vector<Rational> coefficients;
  std::vector<std::pair<Rational, Rational>> supports;
  bool perturbed = false;
};

/// Signed combination of |orders| + 1 disjoint peak-1 bumps on an equispaced
/// grid of [a, b] whose moments vanish at each listed order.
VanishingKernel kernel_for_orders(const Rational& a, const Rational& b, std::vector<unsigned long> orders,
                                  const BumpSpec& spec = {}, const PrecisionBudget& budget = {});

/// Moments 0..n vanish.
VanishingKernel vanishing_moment_kernel(const Rational& a, const Rational& b, unsigned long n,
                                        const BumpSpec& spec = {}, const PrecisionBudget& budget = {});

struct SmoothKernelReport {
  std::vector<double> coefficients;
  std::vector<double> moments;  // by quadrature, orders 0..n+1
  double max_abs_vanished = 0;
};

/// Same construction with exp(-1/((x-l)(r-x))) bumps and Gauss-Legendre
/// quadrature in floating point. A fidelity demo; nothing here is exact.
SmoothKernelReport smooth_vanishing_kernel(double a, double b, unsigned long n, const BumpSpec& spec = {});

struct StageRecord {
  unsigned long exponent = 0;    // k_{n+1}
  Rational scale;                // -a_{l0}, or 1 for the seed stage
  Rational ratio;                // a_{l0}
  unsigned long searched = 0;    // candidates inspected
  std::vector<unsigned long> kernel_orders;
};

struct StagedKernel {
  PiecewisePolyDensity density;
  /// k_0 = 1 followed by k_1 < ... < k_N; order 0 also vanishes.
  std::vector<unsigned long> exponents;
  std::vector<Rational> grid;
  std::vector<StageRecord> stages;
  /// Largest |coefficient| of any peak-1 bump in the density.
  Rational sup_norm;
};

struct StagedOptions {
  std::vector<Rational> grid;  // empty: t_i = b - (b - a) 2^-i
  unsigned long ell_search_cap = 5000;
};

StagedKernel staged_vanishing_kernel(const Rational& a, const Rational& b, unsigned long stages,
                                     const BumpSpec& spec = {}, const StagedOptions& options = {},
                                     const PrecisionBudget& budget = {});

struct MatchedPair {
  PiecewisePolyDensity f1, f2;
  std::vector<unsigned long> agreement;  // orders with s_k(f1) = s_k(f2)
  Rational epsilon;
  Rational c, d;
  StagedKernel kernel;
  Rational kernel_scale;
};

MatchedPair matched_moment_pair(const Rational& a, const Rational& b, unsigned long stages,
                                const BumpSpec& spec = {}, const StagedOptions& options = {},
                                const PrecisionBudget& budget = {});

// ---------------------------------------------------------------------------
// Alternating pairs.

struct AlternatingOptions {
  /// Impose each inequality on the whole run [l, 2l].
  bool padded = false;
  unsigned long ell_search_cap = 20000;
};

struct AlternatingPair {
  PiecewisePolyDensity f, g;
  /// l_0 < ... < l_N; s_l(f) > s_l(g) at even positions, < at odd ones.
  std::vector<unsigned long> indices;
  /// c_1, c_2, ... (c_{N+2} is the final slack and has no bump).
  std::vector<Rational> c;
  Rational d, d_prime, D;
  std::vector<Rational> grid;
  /// h_0, h_1, ... (peak-1 bumps on [t_i, t_{i+1}]).
  std::vector<Polynomial> bumps;
  std::vector<Rational> bump_masses;
  bool padded = false;
  unsigned degree = 4;
};

AlternatingPair alternating_pair(const Rational& a, const Rational& b, unsigned long N, const BumpSpec& spec = {},
                                 const AlternatingOptions& options = {}, const PrecisionBudget& budget = {});

/// Exact re-check of the alternation and the masses; throws ConstructionFailure.
void verify_alternating(const AlternatingPair& pair);

struct RunReport {
  struct Run {
    unsigned long start = 0, end = 0;
    int sign = 0;  // sign of s(g) - s(f) on the run
    Rational harmonic;  // sum of 1/i over the run
    bool holds = false;
    std::optional<unsigned long> first_failure;
  };
  std::vector<Run> runs;
  /// Prefixes of {n : s_n(f) < s_n(g)} and {n : s_n(f) > s_n(g)} up to `depth`.
  std::vector<unsigned long> M1, M2;
  unsigned long depth = 0;
  bool all_hold = false;
};

RunReport run_padded_alternating(const AlternatingPair& pair);

struct UnimodalPair {
  AlternatingPair inner;
  PiecewisePolyDensity base, f, g;
  Rational c, d, K, L, alpha;
  std::vector<unsigned long> indices;
  int f_derivative_sign_changes = 0;
  int g_derivative_sign_changes = 0;
  bool scaling_identity_holds = false;
};

UnimodalPair unimodal_alternating_pair(const Rational& a, const Rational& b, unsigned long N,
                                       const BumpSpec& spec = {}, const AlternatingOptions& options = {},
                                       const PrecisionBudget& budget = {});

/// Number of sign changes of the derivative across all pieces.
int derivative_sign_changes(const PiecewisePolyDensity& d);

struct MixedDemo {
  PiecewisePolyDensity f1, f2, g, mixture;
  Rational gamma1, gamma2;
  Rational x0;
  PositivityCertificate below;  // g - f1
  PositivityCertificate above;  // f2 - g
  bool mixture_is_f = false;
  std::vector<std::pair<unsigned long, int>> mixture_signs;  // sign(s(g) - s(mix)) at the pair's indices
  bool mixture_alternates = false;
};

MixedDemo mixed_incomparable_demo(const AlternatingPair& pair);

// ---------------------------------------------------------------------------
// Discrete pair with alternating CDFs.

struct DiscretePairReport {
  Rational a, y0, g_y0;
  unsigned long truncation = 0;
  std::vector<Rational> c;  // c_1..c_T
  struct CdfRow {
    unsigned long k;
    Rational x, y;
    MomentValue F_x, G_x, F_y, G_y;
    bool G_below_at_x, G_above_at_y;
  };
  std::vector<CdfRow> cdf_rows;
  struct MomentRow {
    unsigned long n;
    Rational lower_bound;  // g(y0) y0^n + exact truncated difference
    Rational claimed;      // g(y0) y0^n
    bool terms_nonnegative;
    bool holds;
  };
  std::vector<MomentRow> moment_rows;
  bool cdf_alternates = false;
  bool moments_dominate = false;
  /// The closed-form tail of g(y0) is geometric from this index on.
  unsigned long tail_from = 10;
};

struct DiscretePair {
  DiscreteRule mu_f, mu_g;
  DiscretePairReport report;
};

/// x_k = 2 - 1/(k+1), f(x_k) = 2^-k, y_k midpoints, y_0 = (1 + a) / 2.
DiscretePair discrete_alternating_cdf_pair(const Rational& a, unsigned long truncation = 40,
                                           unsigned long cdf_checks = 20, unsigned long moment_depth = 100);

/// Exact g(y_0) = sum_i (1 - c_i) 2^-i.
Rational discrete_pair_g_y0();
Rational discrete_pair_c(unsigned long i);

struct AcPair {
  PiecewisePolyDensity f, g;
  struct Row {
    unsigned long k;
    Rational x, z_next;
    Rational F_x, G_x, F_z, G_z;
    bool ok;
  };
  std::vector<Row> rows;
  bool alternates = false;
  TailVerdict empirical;
  Rational missing_f, missing_g;
};

AcPair ac_alternating_cdf_pair(const Rational& a, unsigned long truncation, unsigned long checks = 10,
                               const BumpSpec& spec = {}, unsigned long depth = 200);

}  // namespace momtail
