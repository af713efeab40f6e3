#pragma once

// Leading-order evaluation of S(N, a, b) from the last level of the
// cascade, where a_L is small, and the growth of |S(N)|/sqrt(N) over the
// range of N with a given depth L.

#include <cstdint>
#include <optional>

#include "gsum/renorm.hpp"

namespace gsum {

enum class Regime { below_half, above_half };

struct AsymptoticValue {
  Complex value;
  Regime regime = Regime::below_half;  // below_half iff xi_L - b_L <= 1/2
  /// sqrt(a_L) / sqrt(a_0 ... a_L), the size of the neglected terms up to a
  /// constant: both the O(sqrt(a_L)) correction of the last level and the
  /// bound on the sum of the earlier levels have this order.
  double err_order = 0.0;
  int L = 0;
  double a_L = 0.0;
  double b_L = 0.0;
  double xi_L = 0.0;
};

/// Integral of e(-tau^2/2) over [x, y].
Complex fresnel_integral(double x, double y);
/// Integral of e(-tau^2/2) over [x, +inf).
Complex fresnel_upper(double x);

/// The Fresnel bracket of the last level before weighting:
/// below 1/2, the integral over [-b/sqrt(a), (xi - b)/sqrt(a)];
/// above 1/2, the integral over [-b/sqrt(a), inf) plus
/// e((b - xi + 1/2)/a) times the integral over [(1 - xi + b)/sqrt(a), inf).
Complex leading_bracket(const DoubleDouble& xi, const DoubleDouble& a, const DoubleDouble& b,
                        Regime regime);

AsymptoticValue asymptotic_sum(std::int64_t N, const Params& p, const PrecisionConfig& cfg = {});

struct NormalizedMagnitude {
  double exact = 0.0;       // |S(N)| / sqrt(N) through renorm_sum
  double prediction = 0.0;  // |bracket| / sqrt(xi_L)
  double xi = 0.0;
  double a_L = 0.0;
  Regime regime = Regime::below_half;
};

NormalizedMagnitude normalized_mag(std::int64_t N, const Params& p, const PrecisionConfig& cfg = {});

/// Constants used to turn key = sqrt|b_L| + a_L^(1/4) into bounds on M.
struct GrowthConstants {
  double C = 4.0;          // M <= C / key
  double C_lower = 4.0;    // M >= 1 / (C_lower key) when key <= c
  double c = 0.1;
};

struct GrowthBound {
  int L = 0;
  double M = 0.0;
  double key = 0.0;
  double bound_upper = 0.0;
  std::optional<double> bound_lower;
  double a_L = 0.0;
  double b_L = 0.0;
  std::int64_t N_minus = 0;
  std::int64_t N_plus = 0;
  std::int64_t argmax_N = 0;
  std::int64_t evaluations = 0;
  bool exact_scan = false;
  /// The xi grid was thinned: M is then a lower estimate of the maximum.
  bool budget_exhausted = false;
};

/// M(L, a, b) = max over N^-(L) <= N <= N^+(L) of |S(N)|/sqrt(N). Exact scan
/// when the range holds at most scan_budget integers; otherwise one N per
/// value of xi_L on the grid k a_L, plus the values nearest
/// a_L/(2|b_L|) and sqrt(a_L).
GrowthBound M_of_L(int L, const Params& p, const PrecisionConfig& cfg = {},
                   std::int64_t scan_budget = 1 << 20, const GrowthConstants& k = {});

/// M evaluated only on the xi grid and the two candidates, whatever the
/// range; used to cross-check the exact scan.
GrowthBound M_of_L_grid(int L, const Params& p, const PrecisionConfig& cfg = {},
                        std::int64_t grid_budget = 1 << 16, const GrowthConstants& k = {});

}  // namespace gsum
