#include "gsum/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace gsum {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Below this u the Maclaurin series is used for the Fresnel integral; above
// it the continued fraction for the tail converges in a few dozen terms.
constexpr double kSeriesCut = 1.1;

// Integral of e(-tau^2/2) over [0, u] by its Maclaurin series.
Complex fresnel_series(double u) {
  const Complex z(0.0, -kPi * u * u);  // -i pi u^2
  Complex power(u, 0.0);               // u (-i pi u^2)^k / k!
  Complex sum = power;
  for (int k = 1; k < 200; ++k) {
    power *= z / static_cast<double>(k);
    Complex term = power / static_cast<double>(2 * k + 1);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// e(u^2/2) with the square formed exactly.
Complex half_square_phase(double u) {
  DoubleDouble sq = dd_detail::two_prod(u, u);
  return unit_exp(DoubleDouble(0.5 * sq.hi, 0.5 * sq.lo));
}

// Continued fraction for the complementary Fresnel integrals C + iS in the
// variable x = sqrt(2) u (Lentz's method). Returns h with
// (C + iS)(inf) - (C + iS)(x) = (1+i)/2 * e(u^2/2) * h.
Complex fresnel_cf(double u) {
  const double x = std::numbers::sqrt2 * u;
  const double tiny = 1e-300;
  Complex b(1.0, -2.0 * kPi * u * u);  // 1 - i pi x^2
  Complex c = 1.0 / tiny;
  Complex d = 1.0 / b;
  Complex h = d;
  double n = -1.0;
  for (int k = 2; k < 10000; ++k) {
    n += 2.0;
    const double an = -n * (n + 1.0);
    b += 4.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    Complex del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
  }
  return Complex(x, -x) * h;
}

const Complex kEighthBack = unit_exp(-0.125);    // e(-1/8)
const Complex kEighthFwd = unit_exp(0.125);      // e(1/8)

// |z| below which g is evaluated from its Bernoulli series.
constexpr double kKernelSeriesCut = 0.05;

// e(u^2/2) times the tail integral over [u, inf), u >= 0. Beyond the series
// range the two oscillating factors cancel analytically, leaving a slowly
// varying envelope of size about 1/(2 pi u).
Complex fresnel_envelope(double u) {
  if (u <= kSeriesCut) return half_square_phase(u) * (0.5 * kEighthBack - fresnel_series(u));
  return std::conj(Complex(0.5, 0.5) * fresnel_cf(u)) / std::numbers::sqrt2;
}

}  // namespace

Complex fresnel_tail(double u) {
  if (!(u >= 0.0)) fail(ErrorKind::domain, "fresnel_tail needs u >= 0");
  if (u <= kSeriesCut) return 0.5 * kEighthBack - fresnel_series(u);
  return std::conj(half_square_phase(u)) * fresnel_envelope(u);
}

FresnelValue fresnel_F(double t) {
  if (!std::isfinite(t)) fail(ErrorKind::domain, "fresnel_F needs finite t");
  if (t < 0.0) return {fresnel_tail(-t)};
  if (t <= kSeriesCut) return {0.5 * kEighthBack + fresnel_series(t)};
  return {kEighthBack - fresnel_tail(t)};
}

Complex special_f(double t) {
  if (!std::isfinite(t)) fail(ErrorKind::domain, "special_f needs finite t");
  if (t < 0.0) return fresnel_envelope(-t);
  return half_square_phase(t) * kEighthBack - fresnel_envelope(t);
}

Complex c_of_a(double a) { return kEighthBack / std::sqrt(a); }

Complex pole_free_kernel(Complex z) {
  if (std::abs(z) < kKernelSeriesCut) {
    // 1/(e^w - 1) - 1/w = sum B_k w^(k-1)/k!, w = 2 pi i z.
    const Complex w = Complex(0.0, 2.0 * kPi) * z;
    const Complex w2 = w * w;
    constexpr double c[] = {1.0 / 12.0,         -1.0 / 720.0,         1.0 / 30240.0,
                            -1.0 / 1209600.0,   1.0 / 47900160.0,     -691.0 / 1307674368000.0,
                            1.0 / 74724249600.0};
    Complex acc = c[6];
    for (int k = 5; k >= 0; --k) acc = acc * w2 + c[k];
    return -0.5 + w * acc;
  }
  return 1.0 / (unit_exp(z) - 1.0) - 1.0 / (Complex(0.0, 2.0 * kPi) * z);
}

SpecialValue calF_correction(double xi, double a, double tol, const QuadOptions& opt) {
  const double sa = std::sqrt(a);
  const Complex dir = unit_exp(0.125) * sa;  // dp/ds for p = e^{i pi/4} sqrt(a) s
  // exp(-pi s^2) < 1e-21 beyond |s| = 4.
  const double s_max = 4.0;
  auto integrand = [&](double s) {
    Complex p = dir * s;
    return pole_free_kernel(p - xi) * (std::exp(-kPi * s * s) * dir);
  };
  QuadResult q = integrate(integrand, -s_max, s_max, tol, opt);
  double err = q.err + 16.0 * kEps * (1.0 + std::abs(q.value));
  return {q.value, err};
}

SpecialValue calF(const DoubleDouble& xi, const DoubleDouble& a_dd, const PrecisionConfig& cfg) {
  const double a = static_cast<double>(a_dd);
  if (!std::isfinite(a) || !(a > 0.0 && a < 1.0))
    fail(ErrorKind::domain, "calF needs a in (0,1)");
  if (!std::isfinite(xi.hi)) fail(ErrorKind::domain, "calF needs finite xi");
  if (std::abs(xi.hi) > 1e7) fail(ErrorKind::domain, "calF: |xi| too large to shift into the strip");
  auto shift_phase = [&](const DoubleDouble& x) { return unit_exp(half_square_over(x, a_dd)); };

  // F(x) = F(x - 1) + e(x^2/2a), applied toward the strip |x| <= 1/2.
  DoubleDouble x = xi;
  Complex shifted{};
  long shifts = 0;
  while (x > DoubleDouble(0.5)) {
    shifted += shift_phase(x);
    x -= DoubleDouble(1.0);
    ++shifts;
  }
  while (x < DoubleDouble(-0.5)) {
    x += DoubleDouble(1.0);
    shifted -= shift_phase(x);
    ++shifts;
  }

  // e(1/8) e(x^2/2a) F(x/sqrt(a)), with the quadratic phase taken from the
  // exact x so that only the slowly varying envelope sees the rounded t.
  const double xd = static_cast<double>(x);
  const double t = xd / std::sqrt(a);
  const Complex ph = unit_exp(half_square_over(x, a_dd));
  Complex lead = t < 0.0 ? kEighthFwd * fresnel_envelope(-t) : ph - kEighthFwd * fresnel_envelope(t);

  const double qtol = std::max(0.25 * cfg.quad_tolerance, 1e-16);
  SpecialValue corr = calF_correction(xd, a, qtol);

  Complex value = lead + corr.value + shifted;
  double err = corr.err_estimate + 4.0 * kEps * (4.0 + shifts + std::abs(value));
  if (err > cfg.quad_tolerance)
    fail(ErrorKind::quadrature_failure, "calF: error estimate above quad_tolerance");
  return {value, err};
}

SpecialValue calF(double xi, double a, const PrecisionConfig& cfg) {
  return calF(DoubleDouble(xi), DoubleDouble(a), cfg);
}

SpecialValue calG(const DoubleDouble& xi, const DoubleDouble& a, const PrecisionConfig& cfg) {
  const double ad = static_cast<double>(a);
  PrecisionConfig scaled = cfg;
  scaled.quad_tolerance = cfg.quad_tolerance * std::sqrt(ad);
  SpecialValue f = calF(xi, a, scaled);
  Complex pref = c_of_a(ad) * unit_exp(-half_square_over(xi, a));
  return {pref * f.value, std::abs(pref) * f.err_estimate};
}

SpecialValue calG(double xi, double a, const PrecisionConfig& cfg) {
  return calG(DoubleDouble(xi), DoubleDouble(a), cfg);
}

Complex asymptotic_calF(double xi, double a) {
  if (!std::isfinite(a) || !(a > 0.0 && a < 1.0))
    fail(ErrorKind::domain, "asymptotic_calF needs a in (0,1)");
  if (!(std::abs(xi) <= 0.5)) fail(ErrorKind::domain, "asymptotic_calF needs |xi| <= 1/2");
  return kEighthFwd * special_f(xi / std::sqrt(a));
}

}  // namespace gsum
