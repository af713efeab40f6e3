#include "gsum/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gsum {

namespace {

const Complex kEighthBack = unit_exp(-0.125);  // integral of e(-tau^2/2) over R

Complex conj_if(bool odd, Complex z) { return odd ? std::conj(z) : z; }

double key_of(double aL, double bL) { return std::sqrt(std::abs(bL)) + std::sqrt(std::sqrt(aL)); }

void fill_bounds(GrowthBound& g, const GrowthConstants& k) {
  g.key = key_of(g.a_L, g.b_L);
  g.bound_upper = k.C / g.key;
  if (g.key <= k.c) g.bound_lower = 1.0 / (k.C_lower * g.key);
}

struct LevelInfo {
  double a_L, b_L;
  std::int64_t minus, plus;
};

LevelInfo level_info(int L, const Params& p) {
  p.validate();
  NBounds nb = n_bounds(L, p.a);
  if (!nb.plus) fail(ErrorKind::domain, "M_of_L needs a_L > 0");
  CascadeLevels cl = cascade_levels(nb.minus, p);
  if (cl.L() != L) fail(ErrorKind::precision_exhausted, "cascade depth at N^-(L) disagrees with L");
  const RenormStep& st = cl.steps.back();
  return {static_cast<double>(st.a), static_cast<double>(st.b), nb.minus, *nb.plus};
}

}  // namespace

Complex fresnel_upper(double x) {
  if (x >= 0.0) return fresnel_tail(x);
  return kEighthBack - fresnel_tail(-x);
}

Complex fresnel_integral(double x, double y) {
  // difference of the two tails, keeping the small tails where they are accurate
  if (x >= 0.0 && y >= 0.0) return fresnel_tail(x) - fresnel_tail(y);
  if (x <= 0.0 && y <= 0.0) return fresnel_tail(-y) - fresnel_tail(-x);
  return fresnel_upper(x) - fresnel_upper(y);
}

Complex leading_bracket(const DoubleDouble& xi, const DoubleDouble& a, const DoubleDouble& b,
                        Regime regime) {
  const double sa = std::sqrt(static_cast<double>(a));
  const double lo = -static_cast<double>(b) / sa;
  if (regime == Regime::below_half) return fresnel_integral(lo, static_cast<double>(xi - b) / sa);
  const DoubleDouble gap = DoubleDouble(1.0) - xi + b;  // 1 - (xi - b), in [-1/2, 1/2)
  Complex phase = unit_exp(frac0((b - xi + DoubleDouble(0.5)) / a));
  return fresnel_upper(lo) + phase * fresnel_upper(static_cast<double>(gap) / sa);
}

AsymptoticValue asymptotic_sum(std::int64_t N, const Params& p, const PrecisionConfig& cfg) {
  cfg.validate();
  CascadeLevels cl = cascade_levels(N, p, cfg.max_depth);
  const RenormStep& st = cl.steps.back();
  AsymptoticValue out;
  out.L = cl.L();
  out.a_L = static_cast<double>(st.a);
  out.b_L = static_cast<double>(st.b);
  out.xi_L = static_cast<double>(st.xi);
  const DoubleDouble shift = st.xi - st.b;
  out.regime = shift <= DoubleDouble(0.5) ? Regime::below_half : Regime::above_half;

  double weight_sq = 1.0;
  for (const RenormStep& s : cl.steps) weight_sq *= static_cast<double>(s.a);
  const double scale = 1.0 / std::sqrt(weight_sq);
  Complex bracket = leading_bracket(st.xi, st.a, st.b, out.regime);
  out.value = unit_exp(cl.theta_next) * scale * conj_if(st.conj_odd, bracket);
  out.err_order = std::sqrt(out.a_L) * scale;
  return out;
}

NormalizedMagnitude normalized_mag(std::int64_t N, const Params& p, const PrecisionConfig& cfg) {
  cfg.validate();
  CascadeLevels cl = cascade_levels(N, p, cfg.max_depth);
  const RenormStep& st = cl.steps.back();
  NormalizedMagnitude out;
  out.xi = static_cast<double>(st.xi);
  out.a_L = static_cast<double>(st.a);
  out.regime = (st.xi - st.b) <= DoubleDouble(0.5) ? Regime::below_half : Regime::above_half;
  out.prediction = std::abs(leading_bracket(st.xi, st.a, st.b, out.regime)) / std::sqrt(out.xi);
  out.exact = std::abs(renorm_sum(N, p, cfg)) / std::sqrt(static_cast<double>(N));
  return out;
}

GrowthBound M_of_L_grid(int L, const Params& p, const PrecisionConfig& cfg, std::int64_t grid_budget,
                        const GrowthConstants& k) {
  cfg.validate();
  LevelInfo info = level_info(L, p);
  GrowthBound g;
  g.L = L;
  g.a_L = info.a_L;
  g.b_L = info.b_L;
  g.N_minus = info.minus;
  g.N_plus = info.plus;

  XiValues xv = xi_values(L, p.a, grid_budget);
  g.budget_exhausted = xv.budget_exhausted;
  // each xi value is taken on a block of consecutive N; both ends are used
  std::set<std::int64_t> Ns;
  for (std::size_t i = 0; i < xv.points.size(); ++i) {
    const XiPoint& pt = xv.points[i];
    Ns.insert(pt.N);
    const bool contiguous = i + 1 < xv.points.size() && xv.points[i + 1].k == pt.k + 1;
    if (contiguous) Ns.insert(xv.points[i + 1].N - 1);
    else if (i + 1 == xv.points.size()) Ns.insert(info.plus);
  }

  // xi_0 = a_L / (2|b_L|) and sqrt(a_L), with the neighbouring multiples of a_L
  const std::int64_t K = xv.points.empty() ? 0 : static_cast<std::int64_t>(
                                                      std::floor((1.0 - 0x1p-52) / info.a_L));
  std::vector<double> targets{std::sqrt(info.a_L)};
  if (info.b_L != 0.0) targets.push_back(info.a_L / (2.0 * std::abs(info.b_L)));
  for (double xi0 : targets) {
    const std::int64_t centre = static_cast<std::int64_t>(std::llround(xi0 / info.a_L));
    for (std::int64_t kk = centre - 1; kk <= centre + 1; ++kk)
      if (kk >= 1 && kk <= K) Ns.insert(first_reaching(L, p.a, kk));
  }

  for (std::int64_t N : Ns) {
    double m = std::abs(renorm_sum(N, p, cfg)) / std::sqrt(static_cast<double>(N));
    ++g.evaluations;
    if (m > g.M) {
      g.M = m;
      g.argmax_N = N;
    }
  }
  fill_bounds(g, k);
  return g;
}

GrowthBound M_of_L(int L, const Params& p, const PrecisionConfig& cfg, std::int64_t scan_budget,
                   const GrowthConstants& k) {
  cfg.validate();
  LevelInfo info = level_info(L, p);
  if (info.plus - info.minus + 1 > scan_budget) return M_of_L_grid(L, p, cfg, scan_budget, k);

  GrowthBound g;
  g.L = L;
  g.a_L = info.a_L;
  g.b_L = info.b_L;
  g.N_minus = info.minus;
  g.N_plus = info.plus;
  g.exact_scan = true;

  const DoubleDouble a(p.a), b(p.b);
  Complex s = renorm_sum(info.minus, p, cfg);
  for (std::int64_t N = info.minus;; ++N) {
    double m = std::abs(s) / std::sqrt(static_cast<double>(N));
    ++g.evaluations;
    if (m > g.M) {
      g.M = m;
      g.argmax_N = N;
    }
    if (N == info.plus) break;
    s += unit_exp(quadratic_phase(N, a, b));
  }
  fill_bounds(g, k);
  return g;
}

}  // namespace gsum
