#include "gsum/numeric.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace gsum {

void Params::validate() const {
  if (!std::isfinite(a) || !(a > 0.0 && a < 1.0))
    fail(ErrorKind::domain, "a must lie in (0,1), got " + std::to_string(a));
  if (!std::isfinite(b) || !(b > -0.5 && b <= 0.5))
    fail(ErrorKind::domain, "b must lie in (-1/2,1/2], got " + std::to_string(b));
}

void PrecisionConfig::validate() const {
  if (working_bits < 53 || working_bits > 106)
    fail(ErrorKind::domain, "working_bits must lie in [53,106]");
  if (!(quad_tolerance > 0.0 && quad_tolerance <= 1e-6))
    fail(ErrorKind::domain, "quad_tolerance must lie in (0,1e-6]");
  if (max_depth < 1) fail(ErrorKind::domain, "max_depth must be positive");
}

double frac(double x) {
  double r = x - std::floor(x);
  // x slightly below an integer can round up to exactly 1.
  return r < 1.0 ? r : 0.0;
}

double int_part(double x) {
  double f = std::floor(x);
  return (x - f) < 1.0 ? f : f + 1.0;
}

double frac0(double x) {
  double r = frac(x);
  return r > 0.5 ? r - 1.0 : r;
}

DoubleDouble frac(const DoubleDouble& x) {
  DoubleDouble r = x - floor(x);
  if (r.hi >= 1.0) r = r - DoubleDouble(1.0);
  if (r.hi < 0.0) r = r + DoubleDouble(1.0);
  return r;
}

DoubleDouble frac0(const DoubleDouble& x) {
  DoubleDouble r = frac(x);
  if (r > DoubleDouble(0.5)) r = r - DoubleDouble(1.0);
  return r;
}

Complex unit_exp(double x) {
  double r = frac0(x);
  // Reduce to |f| <= 1/8 turn; the quarter-turn rotation is exact.
  double k = std::nearbyint(4.0 * r);
  double f = r - 0.25 * k;
  double ang = 2.0 * std::numbers::pi * f;
  double c = std::cos(ang);
  double s = std::sin(ang);
  switch ((static_cast<int>(k) % 4 + 4) % 4) {
    case 0: return {c, s};
    case 1: return {-s, c};
    case 2: return {-c, -s};
    default: return {s, -c};
  }
}

Complex unit_exp(const DoubleDouble& x) {
  DoubleDouble r = frac0(x);
  return unit_exp(r.hi + r.lo);
}

Complex unit_exp(Phase p) { return unit_exp(p.turns); }

Complex unit_exp(Complex z) {
  return std::exp(-2.0 * std::numbers::pi * z.imag()) * unit_exp(z.real());
}

DoubleDouble half_square_over(double x, double a) {
  DoubleDouble sq = dd_detail::two_prod(x, x);
  return frac0(sq / DoubleDouble(2.0 * a));
}

DoubleDouble half_square_over(const DoubleDouble& x, const DoubleDouble& a) {
  return frac0(x * x / (a * DoubleDouble(2.0)));
}

namespace {

// Adds frac(x) of an exactly representable double into acc.
inline void add_reduced(DoubleDouble& acc, double x) {
  double r = x - std::floor(x);  // exact for every finite double
  acc = acc + DoubleDouble(r);
}

inline void add_product(DoubleDouble& acc, double x, double y) {
  DoubleDouble p = dd_detail::two_prod(x, y);
  add_reduced(acc, p.hi);
  add_reduced(acc, p.lo);
}

}  // namespace

DoubleDouble quadratic_phase(std::int64_t n, const DoubleDouble& a, const DoubleDouble& b) {
  if (n == 0) return {};
  const double nd = static_cast<double>(n);
  // n^2 / 2 split exactly into two doubles.
  DoubleDouble sq = dd_detail::two_prod(nd, nd);
  const double h1 = 0.5 * sq.hi;
  const double h2 = 0.5 * sq.lo;
  DoubleDouble acc;
  add_product(acc, -a.hi, h1);
  add_product(acc, -a.hi, h2);
  add_product(acc, -a.lo, h1);
  add_product(acc, -a.lo, h2);
  add_product(acc, nd, b.hi);
  add_product(acc, nd, b.lo);
  return frac0(acc);
}

Phase reduced_phase(std::int64_t n, double a, double b, const PrecisionConfig& cfg) {
  if (n < 0) fail(ErrorKind::domain, "reduced_phase needs n >= 0");
  if (cfg.working_bits <= 53) {
    constexpr std::int64_t kMax = 94906265;  // floor(sqrt(2^53))
    if (n > kMax)
      fail(ErrorKind::precision_exhausted, "n^2 exceeds 2^53 at working_bits = 53");
    const double nd = static_cast<double>(n);
    return {frac0(-0.5 * a * (nd * nd) + nd * b)};
  }
  constexpr std::int64_t kMax = std::int64_t{1} << 53;
  if (n >= kMax) fail(ErrorKind::precision_exhausted, "n exceeds 2^53 at double-double precision");
  DoubleDouble p = quadratic_phase(n, DoubleDouble(a), DoubleDouble(b));
  return {frac0(p.hi + p.lo)};
}

}  // namespace gsum
