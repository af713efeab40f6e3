#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "gsum/special.hpp"

using namespace gsum;

namespace {

constexpr double kPi = std::numbers::pi;

// Fixed composite 20-point Gauss-Legendre rule with many panels; slow but
// independent of the adaptive driver.
template <class F>
Complex brute_integral(const F& f, double lo, double hi, int panels) {
  const auto& rule = gauss_legendre(20);
  Complex acc{};
  double w = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    double mid = lo + (p + 0.5) * w;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      acc += rule.weights[i] * f(mid + 0.5 * w * rule.nodes[i]);
  }
  return 0.5 * w * acc;
}

// F(t) = e(-1/8)/2 + integral over [0, t].
Complex fresnel_by_quadrature(double t) {
  auto f = [](double s) { return std::exp(Complex(0.0, -kPi * s * s)); };
  int panels = 40 + static_cast<int>(8 * t * t);
  return 0.5 * unit_exp(-0.125) + brute_integral(f, 0.0, t, panels);
}

// calF from its defining integral on a line shifted off the pole: the
// contour p = c + e^{i pi/4} s with c = xi + 1/2 keeps the pole at xi on its
// left and the pole at xi + 1 on its right.
Complex calF_by_shifted_line(double xi, double a) {
  const double c = xi + 0.5;
  const Complex dir = unit_exp(0.125);
  auto f = [&](double s) {
    Complex p = c + dir * s;
    Complex ph = unit_exp(p * p / (2.0 * a));
    return ph / (unit_exp(p - xi) - 1.0) * dir;
  };
  return brute_integral(f, -12.0, 12.0, 1200);
}

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int n : {2, 5, 16, 20}) {
    const auto& r = gauss_legendre(n);
    double sw = 0.0, m2 = 0.0, mtop = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      sw += r.weights[i];
      m2 += r.weights[i] * r.nodes[i] * r.nodes[i];
      mtop += r.weights[i] * std::pow(r.nodes[i], 2 * n - 2);
    }
    CHECK(sw == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(mtop == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-13));
  }
}

TEST_CASE("fresnel_F limits and midpoint") {
  const Complex full = unit_exp(-0.125);
  CHECK(std::abs(fresnel_F(-1e6).value) <= 1e-6);
  CHECK(std::abs(fresnel_F(1e6).value - full) <= 1e-6);
  CHECK(std::abs(fresnel_F(0.0).value - Complex(1.0, -1.0) / (2.0 * std::numbers::sqrt2)) < 1e-16);
  CHECK(std::abs(special_f(0.0) - Complex(1.0, -1.0) / (2.0 * std::numbers::sqrt2)) < 1e-16);
}

TEST_CASE("fresnel_F against direct quadrature") {
  double worst = 0.0;
  for (double t = -6.0; t <= 6.0; t += 0.0625) {
    Complex ref = fresnel_by_quadrature(t);
    worst = std::max(worst, std::abs(fresnel_F(t).value - ref));
  }
  CHECK(worst < 1e-13);
  // both sides of the series/continued-fraction crossover
  for (double t : {1.0999999, 1.1, 1.1000001, -1.1, -1.1000001}) {
    CHECK(std::abs(fresnel_F(t).value - fresnel_by_quadrature(t)) < 1e-14);
  }
}

TEST_CASE("fresnel tail matches its asymptotic expansion") {
  for (double u : {100.0, 1000.0, 1e4}) {
    // tail(u) ~ e(-u^2/2)/(2 pi i u) * sum_k (-1)^k (2k-1)!! / (2 pi i u^2)^k
    Complex z(0.0, 2.0 * kPi * u * u);
    Complex series = 1.0 - 1.0 / z + 3.0 / (z * z) - 15.0 / (z * z * z) + 105.0 / (z * z * z * z);
    Complex ph = unit_exp(-frac0(0.5 * u * u));
    Complex approx = ph / Complex(0.0, 2.0 * kPi * u) * series;
    CHECK(std::abs(fresnel_tail(u) - approx) < 1e-15 * std::abs(approx) + 1e-18);
    CHECK(std::abs(fresnel_F(-u).value - approx) < 1e-15 * std::abs(approx) + 1e-18);
  }
}

TEST_CASE("special_f has the modulus of F and the tail bound") {
  for (double t = -50.0; t <= 50.0; t += 0.37)
    CHECK(std::abs(std::abs(special_f(t)) - std::abs(fresnel_F(t).value)) < 1e-15);
  // integration by parts: |F(t)| <= 1/(pi |t|) for t < 0
  for (double t : {-1.0, -10.0, -1e3, -1e5})
    CHECK(std::abs(special_f(t)) <= 1.0 / (kPi * std::abs(t)));
}

TEST_CASE("pole-free kernel is continuous across the series cut") {
  for (double ang = 0.0; ang < 2 * kPi; ang += 0.3) {
    Complex dir = std::polar(1.0, ang);
    Complex zin = 0.05 * (1.0 - 1e-12) * dir, zout = 0.05 * (1.0 + 1e-12) * dir;
    // g'(z) = 2 pi i / 12 + O(z^2)
    Complex slope(0.0, 2.0 * kPi / 12.0);
    Complex jump = pole_free_kernel(zout) - pole_free_kernel(zin) - slope * (zout - zin);
    CHECK(std::abs(jump) < 5e-15);
  }
  CHECK(std::abs(pole_free_kernel(0.0) - Complex(-0.5, 0.0)) < 1e-16);
}

TEST_CASE("calF matches the defining contour integral on the strip") {
  double worst = 0.0;
  for (double a : {0.3, 0.5, 0.8}) {
    for (double xi = -0.5; xi <= 0.5001; xi += 0.125) {
      SpecialValue v = calF(xi, a);
      Complex ref = calF_by_shifted_line(xi, a);
      worst = std::max(worst, std::abs(v.value - ref));
    }
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("calF and calG at xi = 0, a = 1/2 against the contour integral") {
  Complex ref = calF_by_shifted_line(0.0, 0.5);
  SpecialValue g = calG(0.0, 0.5);
  CHECK(std::abs(g.value - c_of_a(0.5) * ref) < 1e-11);
  CHECK(std::abs(std::abs(c_of_a(0.01)) - 10.0) < 1e-13);
}

TEST_CASE("difference equations on a grid") {
  PrecisionConfig cfg;
  double worst_ratio = 0.0;
  for (int ia = 1; ia <= 19; ++ia) {
    double a = 0.05 * ia;
    const Complex inv_c = 1.0 / c_of_a(a);
    for (int ix = -40; ix <= 40; ++ix) {
      double xi = 0.05 * ix;
      // shifted arguments formed exactly so that only calF's own error enters
      const DoubleDouble x(xi);
      const DoubleDouble x_m1 = x - DoubleDouble(1.0);
      const DoubleDouble x_r = DoubleDouble(1.0) - x;
      SpecialValue f0 = calF(x, a, cfg);
      SpecialValue f1 = calF(x_m1, a, cfg);
      SpecialValue fm = calF(-x, a, cfg);
      SpecialValue fr = calF(x_r, a, cfg);
      Complex e_xi = unit_exp(half_square_over(x, a));
      Complex e_rx = unit_exp(half_square_over(x_r, a));
      double r1 = std::abs(f0.value - f1.value - e_xi);
      double r2 = std::abs(fm.value + f0.value - e_xi + inv_c);
      double r3 = std::abs(f0.value + fr.value - e_xi - e_rx + inv_c);
      double s1 = f0.err_estimate + f1.err_estimate;
      double s2 = f0.err_estimate + fm.err_estimate;
      double s3 = f0.err_estimate + fr.err_estimate;
      REQUIRE(r1 <= 2 * s1);
      REQUIRE(r2 <= 2 * s2);
      REQUIRE(r3 <= 2 * s3);
      worst_ratio = std::max({worst_ratio, r1 / s1, r2 / s2, r3 / s3});

      SpecialValue g0 = calG(xi, a, cfg);
      SpecialValue g1 = calG(xi + a, a, cfg);
      double rg = std::abs(g1.value - g0.value - unit_exp(-half_square_over(xi, a)));
      // xi + a carries one rounding; its effect on e(-xi^2/2a) is |xi|/a ulp
      double slack = 4e-16 * (1.0 + std::abs(xi) / a) / std::sqrt(a);
      REQUIRE(rg <= 2 * (g0.err_estimate + g1.err_estimate) + slack);
    }
  }
  MESSAGE("worst residual / err_estimate: " << worst_ratio);
}

TEST_CASE("calF is smooth across the strip seams") {
  // Cubic interpolation from points on both sides predicts the seam value;
  // a branch mismatch would show up as an O(1) discrepancy.
  for (double a : {0.1, 0.5, 0.9}) {
    const double h = 1e-3 * a;
    for (double seam : {-1.5, -0.5, 0.5, 1.5}) {
      auto v = [&](double x) { return calF(x, a).value; };
      Complex predicted = (-v(seam - 2 * h) + 4.0 * v(seam - h) + 4.0 * v(seam + h) - v(seam + 2 * h)) / 6.0;
      CHECK(std::abs(predicted - v(seam)) < 1e-7);
      // one-sided slopes agree
      Complex left = (v(seam) - v(seam - h)) / h;
      Complex right = (v(seam + h) - v(seam)) / h;
      CHECK(std::abs(left - right) < 1e-2 * (1.0 + std::abs(left)));
    }
  }
}

TEST_CASE("err_estimate is honest under refinement") {
  for (double a : {0.05, 0.3, 0.95}) {
    for (double xi : {-0.5, -0.2, 0.0, 0.31, 0.5}) {
      SpecialValue base = calF_correction(xi, a, 1e-12);
      QuadOptions fine;
      fine.initial_panels = 16;
      SpecialValue refined = calF_correction(xi, a, 1e-14, fine);
      CHECK(std::abs(base.value - refined.value) <= base.err_estimate);
      CHECK(base.err_estimate <= 1e-12);
    }
  }
}

TEST_CASE("asymptotic surrogate error scales like sqrt(a)") {
  std::vector<double> ratios;
  for (double a : {1e-1, 1e-2, 1e-3, 1e-4}) {
    double worst = 0.0;
    for (double xi = -0.5; xi <= 0.5; xi += 1.0 / 256)
      worst = std::max(worst, std::abs(calF(xi, a).value - asymptotic_calF(xi, a)));
    ratios.push_back(worst / std::sqrt(a));
  }
  double lo = *std::min_element(ratios.begin(), ratios.end());
  double hi = *std::max_element(ratios.begin(), ratios.end());
  MESSAGE("sup|calF - asymptotic|/sqrt(a): " << ratios[0] << " " << ratios[1] << " " << ratios[2]
                                             << " " << ratios[3]);
  CHECK(hi / lo < 2.0);
  CHECK(std::abs(asymptotic_calF(0.0, 0.3) -
                 unit_exp(0.125) * Complex(1.0, -1.0) / (2.0 * std::numbers::sqrt2)) < 1e-16);
  CHECK_THROWS_AS(asymptotic_calF(0.6, 0.3), Error);
  Complex near = calF(0.2, 1e-4).value;
  CHECK(std::abs(near - unit_exp(0.125) * special_f(0.2 / 1e-2)) < 1e-2);
}

TEST_CASE("calF domain and tolerance errors") {
  CHECK_THROWS_AS(calF(0.1, 1.0), Error);
  CHECK_THROWS_AS(calF(0.1, 0.0), Error);
  PrecisionConfig tight;
  tight.quad_tolerance = 1e-17;
  try {
    calF(0.1, 0.5, tight);
    FAIL("expected quadrature failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::quadrature_failure);
  }
}
