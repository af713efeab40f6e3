#pragma once

// The skew product (a, b) -> ({1/a}, {[1/a]/2 - b/a}_0) over the Gauss map:
// its fibre transfer operator and the two-level invariant densities, Monte
// Carlo statistics under the measure da db / ((1 + a) ln 2), the orbits of
// the lattice set {(m a + n)/2}_0, and the coding map on [0, 3].

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gsum/numeric.hpp"

namespace gsum {

// -- two-level densities ---------------------------------------------------

/// f(b) = A on |b| < a/2 and B on |b| > a/2, a probability density on
/// (-1/2, 1/2] when a A + (1 - a) B = 1.
struct PiecewiseDensity {
  double a = 0.5;
  double A = 1.0;
  double B = 1.0;

  double operator()(double b) const { return std::abs(b) < a / 2 ? A : B; }
  double mass() const { return a * A + (1.0 - a) * B; }
  /// Integral over [lo, hi], a subinterval of [-1/2, 1/2].
  double integral(double lo, double hi) const;
};

/// (A_1, B_1) = S(a) (A, B), S(a) = [[a, 1 - a a_1], [a, 1 - a - a a_1]].
struct TransferMatrix {
  Eigen::Matrix2d S;
  double a1 = 0.0;

  explicit TransferMatrix(double a);
  Eigen::Vector2d apply(const Eigen::Vector2d& AB) const { return S * AB; }
};

PiecewiseDensity pf_apply_family(const PiecewiseDensity& d);

/// A density on (-1/2, 1/2] stored as averages over n equal cells.
struct SampledDensity {
  std::vector<double> cells;

  std::size_t size() const { return cells.size(); }
  double width() const { return 1.0 / static_cast<double>(cells.size()); }
  double centre(std::size_t j) const { return -0.5 + (static_cast<double>(j) + 0.5) * width(); }
  double mass() const;
  /// Integral over [-1/2, x], exact for the cell-average representation.
  double cumulative(double x) const;

  static SampledDensity from_function(const std::function<double(double, double)>& cell_integral,
                                      std::size_t n);
};

/// Exact cell averages of a two-level density.
SampledDensity sample(const PiecewiseDensity& d, std::size_t n);

/// Transfer operator of b -> {[1/a]/2 - b/a}_0 on a cell-average density:
/// each output cell receives the integral of f over its preimage intervals.
/// Needs at least 2/a cells.
SampledDensity pf_apply_grid(const SampledDensity& f, double a);

std::vector<PiecewiseDensity> iterate_family(PiecewiseDensity d, int steps);

// -- A_l, B_l along an orbit ---------------------------------------------

struct ABSequences {
  std::vector<double> A, B;          // two-term recursion
  std::vector<double> A_closed, B_closed;  // closed form in terms of B_0
};

/// a_seq = a_0, a_1, ..., a_l. A_0 follows from a_0 A_0 + (1 - a_0) B_0 = 1.
ABSequences iterate_AB(const std::vector<double>& a_seq, double B0);

/// Gauss orbit a_0 ... a_n of a, in double-double and rounded to double.
std::vector<double> gauss_orbit(double a, int n);

// -- the box family ------------------------------------------------------

struct SecondFamily {
  double a = 0.5;
  std::int64_t M = 1;
  double half_width = 0.0;  // f = height on |b| <= half_width
  double height = 0.0;
  PiecewiseDensity image;   // P_a f

  double operator()(double b) const { return std::abs(b) <= half_width ? height : 0.0; }
  double integral(double lo, double hi) const;
};

/// f(b | a, M) and its image under P_a. M must satisfy M <= [1/a]/2 for even
/// [1/a] and M <= ([1/a] + 1)/2 for odd [1/a].
SecondFamily second_family(double a, std::int64_t M);

// -- Monte Carlo under m ---------------------------------------------------

/// a = 2^u - 1 with u uniform on (0,1), b uniform on (-1/2, 1/2].
Params sample_m(std::mt19937_64& rng);

/// One step of the skew product in double precision; a rounding to exactly
/// 0 (probability about 2^-52 per step) is replaced by a fresh Gauss draw.
Params skew_step(const Params& p, std::mt19937_64& rng);

/// Engine for chunk `index` of a run seeded with `seed`: results do not
/// depend on the number of threads.
std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t index);

struct Estimate {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
};

struct CountingStats {
  int L = 0;
  std::string phi;
  Estimate norm1;
  Estimate norm2;  // sqrt of the mean of N^2, delta-method error
  Estimate norm2_sq;
  std::int64_t samples = 0;
  /// norm1 at each requested checkpoint L' <= L, same samples
  std::vector<std::pair<int, Estimate>> checkpoints;
};

struct Threshold {
  std::string name;
  std::function<double(int)> phi;
};

/// phi(l) = (l + 2)^(-p).
Threshold power_threshold(double p);

/// Monte Carlo norms of N(L, a, b) = #{l <= L : a_l^(1/4) <= phi(l), |b_l|^(1/2) <= phi(l)}.
CountingStats counting_norms(int L, const Threshold& phi, std::int64_t samples, std::uint64_t seed,
                             const std::vector<int>& checkpoints = {}, int threads = 0);

/// (2 / ln 2) sum_{l <= L} phi^6(l).
double counting_reference(int L, const Threshold& phi);

/// ln N^-(L) for the sequence a_0 .. a_{L-1}: the backward recursion
/// m_L = 1, m_l = ceil(m_{l+1} / a_l), switched to logarithms once the
/// ceiling no longer changes a double.
double log_n_minus(const std::vector<double>& a_seq, int L);

struct BirkhoffStats {
  Estimate birkhoff;   // (1/L) sum_{l<L} ln(1/a_l)
  Estimate log_nminus; // ln N^-(L) / L
  double quadrature = 0.0;
};

BirkhoffStats birkhoff_A(std::int64_t samples, int L, std::uint64_t seed, int threads = 0);

/// (1/ln 2) integral_0^1 ln(1/a) / (1 + a) da by Gauss-Legendre after the
/// substitution a = e^-t.
double birkhoff_constant_quadrature();

// -- orbits of b in {(m a + n)/2}_0 -----------------------------------------

enum class BSymbol { zero, half, plus_half_a, minus_half_a, other };

struct BaPoint {
  int j = 0;
  std::int64_t n = 0;  // n_j
  int epsilon = 0;     // eps_j
  double a = 0.0;      // a_j
  double b_exact = 0.0;  // (n_j a_j - [n_j a_j] - eps_j)/2, reduced to (-1/2, 1/2]
  double b_step = 0.0;   // one skew step from the previous b_exact
  double b_free = 0.0;   // free-running floating iteration from b_0
  BSymbol symbol = BSymbol::other;
  bool parity_even = false;  // [1/a_j] even
};

struct BaOrbit {
  std::vector<BaPoint> points;
  std::optional<int> j0;  // first j with n_j in {-1, 0, 1}
  double max_step_mismatch = 0.0;  // max |b_exact - b_step| mod 1
  /// First j where the free-running b departs from b_exact by more than 1e-9.
  std::optional<int> free_departure;
  bool table_consistent = true;  // transitions after j0 + 1 follow the table
  bool membership = true;        // b_j in {0, 1/2, -a_j/2} for j > j0
};

/// Tracks b_0 = {(m a + n)/2}_0, (m, n) not both odd, for j <= jmax.
BaOrbit ba_orbit(double a, std::int64_t m, std::int64_t n, int jmax);

/// The next symbol predicted by the transition table for b in {0, 1/2, +-a/2}.
BSymbol table_next(BSymbol s, bool parity_even);

// -- the coding map on [0, 3] --------------------------------------------

/// The map on [0, 3] whose integer part codes b in {0, -a/2, 1/2} and whose
/// fractional part follows the Gauss map. Rejects x outside [0, 3], the
/// seams 1 and 2, the endpoint 3 and the point 0.
double tilde_map(double x);

/// b coded by the integer part of x: [0,1) -> 0, (1,2) -> -a/2, (2,3) -> 1/2.
double tilde_decode_b(double x);

/// Density of nu: 1/(3 ln 2 (x - i + 1)) on [i, i+1].
double nu_density(double x);
double nu_cdf(double x);
double sample_nu(std::mt19937_64& rng);

struct InvarianceReport {
  double ks_distance = 0.0;
  std::int64_t samples = 0;
  std::vector<double> grid;
  std::vector<double> P1;      // transfer operator of 1_X w.r.t. nu, on the grid
  double max_P1_deviation = 0.0;
  double max_gauss_deviation = 0.0;  // |(P_e + P_o) 1 - 1| on [0, 1]
  std::vector<double> lag_covariance;  // lags 1..20 of the threshold event
  double event_probability = 0.0;
  double decay_rate = 0.0;  // fitted exponential rate of |covariance|
};

/// Sum over k >= 1 of u(1/(2k + x)) / ((2k + x)(2k + 1 + x)) for u = 1 with
/// an Euler-Maclaurin tail; times (1 + x) gives (P_e 1)(x). odd selects
/// 2k - 1 in place of 2k.
double parity_series_of_one(double x, bool odd, double tol = 1e-13);

/// (P 1_X)(y) from the preimages of y under tilde_map.
double tilde_P1(double y);

InvarianceReport tilde_invariance_check(std::int64_t samples, std::uint64_t seed, int grid_points = 300,
                                        double event_threshold = 0.1);

}  // namespace gsum
