#pragma once

// The Fresnel-type integral F(t) and the special function calF(xi, a)
// defined by the contour integral of e(p^2/2a) / (e(p - xi) - 1) along the
// line xi + e^{i pi/4} R, passing the pole at p = xi on its left.

#include "gsum/numeric.hpp"
#include "gsum/quadrature.hpp"

namespace gsum {

struct SpecialValue {
  Complex value;
  double err_estimate = 0.0;
};

struct FresnelValue {
  Complex value;
};

/// F(t) = integral of e(-tau^2/2) over (-inf, t]. Absolute error about 1e-15.
FresnelValue fresnel_F(double t);

/// Integral of e(-tau^2/2) over [u, +inf) for u >= 0, with relative accuracy
/// kept in the far tail.
Complex fresnel_tail(double u);

/// f(t) = e(t^2/2) F(t).
Complex special_f(double t);

/// c(a) = e(-1/8) / sqrt(a).
Complex c_of_a(double a);

/// g(z) = 1/(e(z) - 1) - 1/(2 pi i z), analytic for |z| < 1.
Complex pole_free_kernel(Complex z);

/// The analytic part of calF on the strip |xi| <= 1/2: the integral of
/// g(p - xi) e(p^2/2a) along e^{i pi/4} R.
SpecialValue calF_correction(double xi, double a, double tol, const QuadOptions& opt = {});

/// calF(xi, a). Arguments outside [-1/2, 1/2] are shifted into the strip with
/// calF(xi) - calF(xi - 1) = e(xi^2/2a). The double-double overload keeps the
/// shift phases exact for large xi^2/a.
SpecialValue calF(const DoubleDouble& xi, const DoubleDouble& a, const PrecisionConfig& cfg = {});
SpecialValue calF(double xi, double a, const PrecisionConfig& cfg = {});

/// calG(xi, a) = c(a) e(-xi^2/2a) calF(xi, a).
SpecialValue calG(const DoubleDouble& xi, const DoubleDouble& a, const PrecisionConfig& cfg = {});
SpecialValue calG(double xi, double a, const PrecisionConfig& cfg = {});

/// Leading term e(1/8) f(xi / sqrt(a)); differs from calF by O(sqrt(a)).
Complex asymptotic_calF(double xi, double a);

}  // namespace gsum
