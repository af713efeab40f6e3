#pragma once

// Phase conventions and circle-point evaluation. Phases are measured in
// turns (mod 1) everywhere; radians only appear inside unit_exp.

#include <complex>
#include <cstdint>

#include "gsum/double_double.hpp"
#include "gsum/error.hpp"

namespace gsum {

using Complex = std::complex<double>;

/// A phase in turns, stored as its representative in (-1/2, 1/2].
struct Phase {
  double turns = 0.0;
};

/// A point (a, b) of (0,1) x (-1/2,1/2].
struct Params {
  double a = 0.5;
  double b = 0.0;

  /// Throws ErrorKind::domain when the invariants do not hold.
  void validate() const;
};

struct PrecisionConfig {
  /// Mantissa width used for phase accumulation. 53 selects plain double
  /// arithmetic, anything in (53, 106] selects double-double.
  int working_bits = 106;
  /// Absolute error target for special-function quadrature.
  double quad_tolerance = 1e-12;
  /// Upper bound on the renormalization depth L.
  int max_depth = 64;

  void validate() const;
};

// -- fractional parts ---------------------------------------------------

/// {x} in [0,1).
double frac(double x);
/// [x], so that x = int_part(x) + frac(x).
double int_part(double x);
/// {x}_0 in (-1/2, 1/2], congruent to x mod 1.
double frac0(double x);

DoubleDouble frac(const DoubleDouble& x);
DoubleDouble frac0(const DoubleDouble& x);

// -- circle points ------------------------------------------------------

/// e(x) = exp(2 pi i x) for real x (turns).
Complex unit_exp(double x);
Complex unit_exp(const DoubleDouble& x);
Complex unit_exp(Phase p);
/// e(z) = exp(2 pi i z) for complex z.
Complex unit_exp(Complex z);

/// frac0(x^2 / (2 a)) evaluated from the exact square of x.
DoubleDouble half_square_over(double x, double a);
DoubleDouble half_square_over(const DoubleDouble& x, const DoubleDouble& a);

// -- quadratic phases ---------------------------------------------------

/// (-a n^2/2 + n b) mod 1 with a, b given to double-double precision.
/// Requires |n| < 2^53; the result is accurate to about 2^-100.
DoubleDouble quadratic_phase(std::int64_t n, const DoubleDouble& a, const DoubleDouble& b);

/// (-a n^2/2 + n b) mod 1. With cfg.working_bits == 53 this is evaluated in
/// plain double and needs n^2 < 2^53; otherwise double-double with n < 2^53.
/// Absolute error is at most 2^(-working_bits + 2 log2 n).
Phase reduced_phase(std::int64_t n, double a, double b, const PrecisionConfig& cfg = {});

}  // namespace gsum
