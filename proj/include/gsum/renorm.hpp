#pragma once

// Exact renormalization of S(N, a, b) = sum_{n<N} e(-a n^2/2 + n b).
// One step rewrites S(N, a, b) through S([aN], {1/a}, b_1) and two values
// of calF; iterating down the continued-fraction cascade of a leaves
// O(log N) special-function evaluations.

#include <cstdint>
#include <optional>
#include <vector>

#include "gsum/numeric.hpp"
#include "gsum/special.hpp"

namespace gsum {

/// One level (a_l, b_l, N_l, xi_l, theta_l) of the cascade.
struct RenormStep {
  int l = 0;
  DoubleDouble a;      // a_l in (0,1)
  DoubleDouble b;      // b_l in (-1/2, 1/2]
  std::int64_t N = 0;  // N_l
  DoubleDouble xi;     // {a_l N_l}
  DoubleDouble theta;  // theta_l in turns, reduced mod 1
  bool conj_odd = false;
};

struct RenormTrace {
  std::vector<RenormStep> steps;  // l = 0..L
  int L = 0;
  std::vector<Complex> terms;     // weighted e(theta_l)/sqrt(a_0..a_l) * DeltaF_l^{*l}
  std::vector<double> term_errors;
  /// Set when some a_l became exactly 0 (a rational to working precision);
  /// the remaining block S(N_l, 0, b_l) is then summed in closed form and
  /// stored in `remainder`.
  bool rational_termination = false;
  /// Set when a_{L+1} was positive but tiny and N_{L+1} small; the block
  /// S(N_{L+1}, a_{L+1}, b_{L+1}) was summed directly into `remainder`.
  bool direct_tail = false;
  Complex remainder{};
};

/// S(N, a, b) by direct summation with reduced_phase.
Complex naive_sum(std::int64_t N, const Params& p, const PrecisionConfig& cfg = {});
/// Direct summation with a and b given to double-double precision.
Complex naive_sum(std::int64_t N, const DoubleDouble& a, const DoubleDouble& b);

struct GaussStepResult {
  DoubleDouble a;
  DoubleDouble b;
  /// {1/a} vanished: the input was rational at working precision.
  bool terminated = false;
};

/// (a, b) -> ({1/a}, {-b/a + [1/a]/2}_0).
GaussStepResult gauss_step(const DoubleDouble& a, const DoubleDouble& b);
Params gauss_step(const Params& p);

/// One application of the renormalization identity with S(N_1, a_1, b_1)
/// summed directly.
Complex renorm_once(std::int64_t N, const Params& p, const PrecisionConfig& cfg = {});

RenormTrace build_trace(std::int64_t N, const Params& p, const PrecisionConfig& cfg = {});
Complex recompose(const RenormTrace& trace);
/// Sum of the per-term error bounds, each calF error scaled by its weight.
double trace_error(const RenormTrace& trace);

Complex renorm_sum(std::int64_t N, const Params& p, const PrecisionConfig& cfg = {});

// -- depth structure of the cascade --------------------------------------

/// The continued-fraction orbit a_0, a_1, ... of a single a, extended on
/// demand in double-double arithmetic.
class GaussCascade {
 public:
  explicit GaussCascade(double a);

  /// a_l; terminated() reports whether the orbit hit 0 before level l.
  const DoubleDouble& a(int l);
  /// Index of the first a_l equal to 0, if any was reached so far.
  std::optional<int> zero_level() const { return zero_level_; }
  /// N_l(N) = [a_{l-1}[... [a_0 N]]].
  std::int64_t level_count(std::int64_t N, int l);
  /// L(N), the last level with N_l >= 1 (requires N >= 1).
  int depth(std::int64_t N, int max_depth = 1000);

 private:
  void extend(int l);
  std::vector<DoubleDouble> a_;
  std::optional<int> zero_level_;
};

struct NBounds {
  std::int64_t minus = 0;
  std::optional<std::int64_t> plus;  // empty when L(N) never exceeds L
};

/// N^-(L) = min{N : L(N) = L} and N^+(L) = max{N : L(N) = L}.
NBounds n_bounds(int L, double a);

struct XiPoint {
  std::int64_t N = 0;
  std::int64_t k = 0;  // xi_L(N) = k a_L
  double xi = 0.0;
};

struct XiValues {
  std::vector<XiPoint> points;
  /// More than `budget` values exist; points holds an even thinning.
  bool budget_exhausted = false;
  double a_L = 0.0;
};

/// Smallest N with N_L(N) >= k.
std::int64_t first_reaching(int L, double a, std::int64_t k);

/// The cascade of (a_l, b_l, N_l, xi_l, theta_l) down to the last level L
/// with N_L >= 1, without any special-function evaluation.
struct CascadeLevels {
  std::vector<RenormStep> steps;  // l = 0..L
  DoubleDouble theta_next;        // theta_{L+1}
  int L() const { return static_cast<int>(steps.size()) - 1; }
};
CascadeLevels cascade_levels(std::int64_t N, const Params& p, int max_depth = 200);

/// The smallest N realizing each value xi_L(N) = k a_L < 1.
XiValues xi_values(int L, double a, std::int64_t budget);

}  // namespace gsum
