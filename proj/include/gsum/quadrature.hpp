#pragma once

// Adaptive composite Gauss-Legendre quadrature for smooth complex-valued
// integrands on a finite interval. Each panel is compared against its two
// halves; the difference is the panel's error estimate.

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "gsum/error.hpp"

namespace gsum {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point rule, computed once per n and cached.
const GaussLegendreRule& gauss_legendre(int n);

struct QuadResult {
  std::complex<double> value{};
  double err = 0.0;
  long evals = 0;
};

struct QuadOptions {
  int order = 16;
  int initial_panels = 8;
  int max_level = 30;
  long max_evals = 200000;
};

namespace quad_detail {

template <class F>
std::complex<double> panel(const F& f, const GaussLegendreRule& rule, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::complex<double> acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * acc;
}

template <class F>
void refine(const F& f, const GaussLegendreRule& rule, double lo, double hi,
            std::complex<double> coarse, double tol, int level, const QuadOptions& opt,
            QuadResult& out) {
  const double mid = 0.5 * (lo + hi);
  auto left = panel(f, rule, lo, mid);
  auto right = panel(f, rule, mid, hi);
  out.evals += 2 * static_cast<long>(rule.nodes.size());
  auto fine = left + right;
  double diff = std::abs(fine - coarse);
  if (diff <= tol || level >= opt.max_level) {
    out.value += fine;
    out.err += diff;
    return;
  }
  if (out.evals > opt.max_evals)
    fail(ErrorKind::quadrature_failure, "quadrature node budget exhausted");
  refine(f, rule, lo, mid, left, 0.5 * tol, level + 1, opt, out);
  refine(f, rule, mid, hi, right, 0.5 * tol, level + 1, opt, out);
}

}  // namespace quad_detail

/// Integrates f over [lo, hi] to absolute tolerance tol. The returned err is
/// the sum of panel-versus-halves differences, an upper estimate for the
/// error of the accepted (refined) values.
template <class F>
QuadResult integrate(const F& f, double lo, double hi, double tol, const QuadOptions& opt = {}) {
  const auto& rule = gauss_legendre(opt.order);
  QuadResult out;
  const int panels = opt.initial_panels;
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    double a = lo + p * width;
    double b = (p + 1 == panels) ? hi : a + width;
    auto coarse = quad_detail::panel(f, rule, a, b);
    out.evals += static_cast<long>(rule.nodes.size());
    quad_detail::refine(f, rule, a, b, coarse, tol / panels, 0, opt, out);
  }
  return out;
}

}  // namespace gsum
