#include "gsum/renorm.hpp"

#include <cmath>
#include <string>

namespace gsum {

namespace {

// Below this a_{l+1} the special-function route loses about
// -log2(a_0..a_{l+1})/2 bits; a short block is summed directly instead.
constexpr double kDirectTailA = 0x1p-24;
constexpr double kEps = 0x1p-52;
constexpr std::int64_t kDirectTailN = std::int64_t{1} << 20;
constexpr std::int64_t kMaxCount = std::int64_t{1} << 53;

// Neumaier-compensated complex accumulator.
struct CompensatedSum {
  double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;

  static void add(double& s, double& c, double x) {
    double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  void operator+=(Complex z) {
    add(re, cre, z.real());
    add(im, cim, z.imag());
  }
  Complex value() const { return {re + cre, im + cim}; }
};

std::int64_t floor_to_int(const DoubleDouble& x) {
  DoubleDouble f = floor(x);
  return static_cast<std::int64_t>(f.hi) + static_cast<std::int64_t>(f.lo);
}

// sum_{n<N} e(n b), the block left over when the cascade reaches a = 0.
Complex linear_sum(std::int64_t N, const DoubleDouble& b) {
  if (N == 0) return {};
  DoubleDouble r = frac0(b);
  if (r.hi == 0.0) return {static_cast<double>(N), 0.0};
  const DoubleDouble n(static_cast<double>(N));
  // e((N-1)b/2) sin(pi N b) / sin(pi b)
  Complex mid = unit_exp(frac0((n - DoubleDouble(1.0)) * r * DoubleDouble(0.5)));
  double num = unit_exp(frac0(n * r * DoubleDouble(0.5))).imag();
  double den = unit_exp(r * DoubleDouble(0.5)).imag();
  return mid * (num / den);
}

Complex conj_if(bool odd, Complex z) { return odd ? std::conj(z) : z; }

}  // namespace

Complex naive_sum(std::int64_t N, const Params& p, const PrecisionConfig& cfg) {
  if (N < 0) fail(ErrorKind::domain, "naive_sum needs N >= 0");
  CompensatedSum acc;
  for (std::int64_t n = 0; n < N; ++n) acc += unit_exp(reduced_phase(n, p.a, p.b, cfg));
  return acc.value();
}

Complex naive_sum(std::int64_t N, const DoubleDouble& a, const DoubleDouble& b) {
  if (N < 0) fail(ErrorKind::domain, "naive_sum needs N >= 0");
  if (N > kMaxCount) fail(ErrorKind::precision_exhausted, "naive_sum needs N <= 2^53");
  CompensatedSum acc;
  for (std::int64_t n = 0; n < N; ++n) acc += unit_exp(quadratic_phase(n, a, b));
  return acc.value();
}

GaussStepResult gauss_step(const DoubleDouble& a, const DoubleDouble& b) {
  if (!(a.hi > 0.0 && a.hi < 1.0)) fail(ErrorKind::domain, "gauss_step needs a in (0,1)");
  DoubleDouble inv = DoubleDouble(1.0) / a;
  DoubleDouble whole = floor(inv);
  DoubleDouble a1 = inv - whole;
  // A quotient within a few units of the double-double precision of an
  // integer is taken to be that integer: the orbit of a rational a ends here
  // rather than continuing on rounding noise.
  const double snap = 0x1p-96 * inv.hi;
  bool terminated = false;
  if (a1.hi <= snap) {
    a1 = DoubleDouble(0.0);
    terminated = true;
  } else if (a1.hi >= 1.0 - snap) {
    whole += DoubleDouble(1.0);
    a1 = DoubleDouble(0.0);
    terminated = true;
  }
  DoubleDouble b1 = frac0(whole * DoubleDouble(0.5) - b / a);
  return {a1, b1, terminated};
}

Params gauss_step(const Params& p) {
  p.validate();
  GaussStepResult r = gauss_step(DoubleDouble(p.a), DoubleDouble(p.b));
  return {static_cast<double>(r.a), frac0(static_cast<double>(r.b))};
}

Complex renorm_once(std::int64_t N, const Params& p, const PrecisionConfig& cfg) {
  p.validate();
  cfg.validate();
  if (N < 0) fail(ErrorKind::domain, "renorm_once needs N >= 0");
  if (N == 0) return {};
  if (N >= kMaxCount) fail(ErrorKind::precision_exhausted, "renorm_once needs N < 2^53");
  const DoubleDouble a(p.a), b(p.b);
  const DoubleDouble aN = a * DoubleDouble(static_cast<double>(N));
  const std::int64_t N1 = floor_to_int(aN);
  const DoubleDouble xi = aN - DoubleDouble(static_cast<double>(N1));

  GaussStepResult next = gauss_step(a, b);
  Complex s1 = next.terminated ? linear_sum(N1, next.b) : naive_sum(N1, next.a, next.b);

  SpecialValue f_xi = calF(xi - b, a, cfg);
  SpecialValue f_0 = calF(-b, a, cfg);
  Complex bracket = unit_exp(half_square_over(b, a)) * std::conj(s1) +
                    unit_exp(quadratic_phase(N, a, b)) * f_xi.value - f_0.value;
  return c_of_a(p.a) * bracket;
}

RenormTrace build_trace(std::int64_t N, const Params& p, const PrecisionConfig& cfg) {
  p.validate();
  cfg.validate();
  if (N < 1) fail(ErrorKind::domain, "build_trace needs N >= 1");
  if (N >= kMaxCount) fail(ErrorKind::precision_exhausted, "build_trace needs N < 2^53");

  RenormTrace tr;
  RenormStep st;
  st.a = DoubleDouble(p.a);
  st.b = DoubleDouble(p.b);
  st.N = N;
  st.theta = DoubleDouble(-0.125);
  double weight_sq = 1.0;  // a_0 ... a_l

  for (int l = 0;; ++l) {
    if (l > cfg.max_depth)
      fail(ErrorKind::depth_limit, "cascade deeper than max_depth = " + std::to_string(cfg.max_depth));
    st.l = l;
    st.conj_odd = (l % 2) == 1;
    const DoubleDouble aN = st.a * DoubleDouble(static_cast<double>(st.N));
    const std::int64_t next_N = floor_to_int(aN);
    st.xi = aN - DoubleDouble(static_cast<double>(next_N));

    SpecialValue f_xi = calF(st.xi - st.b, st.a, cfg);
    SpecialValue f_0 = calF(-st.b, st.a, cfg);
    Complex delta = unit_exp(quadratic_phase(st.N, st.a, st.b)) * f_xi.value - f_0.value;
    weight_sq *= static_cast<double>(st.a);
    const double scale = 1.0 / std::sqrt(weight_sq);
    tr.terms.push_back(unit_exp(st.theta) * scale * conj_if(st.conj_odd, delta));
    tr.term_errors.push_back(scale * (f_xi.err_estimate + f_0.err_estimate));
    tr.steps.push_back(st);

    if (next_N == 0) {
      tr.L = l;
      return tr;
    }

    GaussStepResult g = gauss_step(st.a, st.b);
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    DoubleDouble theta_next =
        frac0(st.theta + DoubleDouble(sign) * (DoubleDouble(0.125) + half_square_over(st.b, st.a)));
    const bool tiny = static_cast<double>(g.a) < kDirectTailA && next_N <= kDirectTailN;
    if (g.terminated || tiny) {
      // S = sum of the terms so far + e(theta_{l+1} + (-1)^{l+1}/8) / sqrt(a_0..a_l)
      //     * conj^{l+1} S(N_{l+1}, a_{l+1}, b_{l+1})
      tr.L = l;
      tr.rational_termination = g.terminated;
      tr.direct_tail = tiny && !g.terminated;
      Complex w = unit_exp(frac0(theta_next - DoubleDouble(sign * 0.125))) * scale;
      Complex rest = g.terminated ? linear_sum(next_N, g.b) : naive_sum(next_N, g.a, g.b);
      tr.remainder = w * conj_if(!st.conj_odd, rest);
      tr.term_errors.back() += scale * 4.0 * kEps * static_cast<double>(next_N);
      return tr;
    }
    st.a = g.a;
    st.b = g.b;
    st.N = next_N;
    st.theta = theta_next;
  }
}

Complex recompose(const RenormTrace& trace) {
  CompensatedSum acc;
  for (Complex t : trace.terms) acc += t;
  acc += trace.remainder;
  return acc.value();
}

double trace_error(const RenormTrace& trace) {
  double e = 0.0;
  for (double x : trace.term_errors) e += x;
  return e;
}

Complex renorm_sum(std::int64_t N, const Params& p, const PrecisionConfig& cfg) {
  if (N == 0) {
    p.validate();
    return {};
  }
  return recompose(build_trace(N, p, cfg));
}

// -- cascade depth --------------------------------------------------------

GaussCascade::GaussCascade(double a) {
  if (!std::isfinite(a) || !(a > 0.0 && a < 1.0)) fail(ErrorKind::domain, "a must lie in (0,1)");
  a_.push_back(DoubleDouble(a));
}

void GaussCascade::extend(int l) {
  while (static_cast<int>(a_.size()) <= l) {
    const DoubleDouble& last = a_.back();
    if (last.hi == 0.0) {
      a_.push_back(DoubleDouble(0.0));
      continue;
    }
    GaussStepResult g = gauss_step(last, DoubleDouble(0.0));
    a_.push_back(g.a);
    if (g.terminated && !zero_level_) zero_level_ = static_cast<int>(a_.size()) - 1;
  }
}

const DoubleDouble& GaussCascade::a(int l) {
  extend(l);
  return a_[l];
}

std::int64_t GaussCascade::level_count(std::int64_t N, int l) {
  std::int64_t n = N;
  for (int j = 0; j < l && n > 0; ++j) n = floor_to_int(a(j) * DoubleDouble(static_cast<double>(n)));
  return n;
}

int GaussCascade::depth(std::int64_t N, int max_depth) {
  if (N < 1) fail(ErrorKind::domain, "depth needs N >= 1");
  std::int64_t n = N;
  for (int l = 0; l <= max_depth; ++l) {
    std::int64_t next = floor_to_int(a(l) * DoubleDouble(static_cast<double>(n)));
    if (next == 0) return l;
    n = next;
  }
  fail(ErrorKind::depth_limit, "cascade deeper than " + std::to_string(max_depth));
}

namespace {

// Smallest N with N_L(N) >= k, searching upward from lo.
std::int64_t first_reaching(GaussCascade& c, int L, std::int64_t k, std::int64_t lo) {
  std::int64_t hi = std::max<std::int64_t>(lo, 1);
  while (c.level_count(hi, L) < k) {
    if (hi > kMaxCount / 2)
      fail(ErrorKind::precision_exhausted, "N beyond 2^53 needed to reach depth " + std::to_string(L));
    lo = hi;
    hi *= 2;
  }
  // invariant: level_count(lo) < k <= level_count(hi), unless hi == lo
  if (c.level_count(lo, L) >= k) return lo;
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (c.level_count(mid, L) >= k)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

NBounds n_bounds(int L, double a) {
  if (L < 0) fail(ErrorKind::domain, "n_bounds needs L >= 0");
  GaussCascade c(a);
  for (int j = 0; j < L; ++j)
    if (c.a(j).hi == 0.0) fail(ErrorKind::domain, "depth L is never reached: a is rational");
  NBounds nb;
  nb.minus = first_reaching(c, L, 1, 1);
  if (c.a(L).hi == 0.0) return nb;
  nb.plus = first_reaching(c, L + 1, 1, nb.minus) - 1;
  return nb;
}

std::int64_t first_reaching(int L, double a, std::int64_t k) {
  if (L < 0 || k < 1) fail(ErrorKind::domain, "first_reaching needs L >= 0 and k >= 1");
  GaussCascade c(a);
  return first_reaching(c, L, k, 1);
}

CascadeLevels cascade_levels(std::int64_t N, const Params& p, int max_depth) {
  p.validate();
  if (N < 1) fail(ErrorKind::domain, "cascade_levels needs N >= 1");
  if (N >= kMaxCount) fail(ErrorKind::precision_exhausted, "cascade_levels needs N < 2^53");
  CascadeLevels out;
  RenormStep st;
  st.a = DoubleDouble(p.a);
  st.b = DoubleDouble(p.b);
  st.N = N;
  st.theta = DoubleDouble(-0.125);
  for (int l = 0;; ++l) {
    if (l > max_depth) fail(ErrorKind::depth_limit, "cascade deeper than " + std::to_string(max_depth));
    st.l = l;
    st.conj_odd = (l % 2) == 1;
    const DoubleDouble aN = st.a * DoubleDouble(static_cast<double>(st.N));
    const std::int64_t next_N = floor_to_int(aN);
    st.xi = aN - DoubleDouble(static_cast<double>(next_N));
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    DoubleDouble theta_next =
        frac0(st.theta + DoubleDouble(sign) * (DoubleDouble(0.125) + half_square_over(st.b, st.a)));
    out.steps.push_back(st);
    if (next_N == 0) {
      out.theta_next = theta_next;
      return out;
    }
    GaussStepResult g = gauss_step(st.a, st.b);
    if (g.terminated) fail(ErrorKind::domain, "a is rational at working precision; level " +
                                                  std::to_string(l + 1) + " has a = 0");
    st.a = g.a;
    st.b = g.b;
    st.N = next_N;
    st.theta = theta_next;
  }
}

XiValues xi_values(int L, double a, std::int64_t budget) {
  if (budget < 1) fail(ErrorKind::domain, "xi_values needs a positive budget");
  NBounds nb = n_bounds(L, a);
  if (!nb.plus) fail(ErrorKind::domain, "xi_values needs a_L > 0");
  GaussCascade c(a);
  const DoubleDouble aL = c.a(L);
  // number of k >= 1 with k a_L < 1
  DoubleDouble inv = DoubleDouble(1.0) / aL;
  std::int64_t K = floor_to_int(inv);
  if (aL * DoubleDouble(static_cast<double>(K)) >= DoubleDouble(1.0)) --K;

  XiValues out;
  out.a_L = static_cast<double>(aL);
  std::vector<std::int64_t> ks;
  if (K <= budget) {
    for (std::int64_t k = 1; k <= K; ++k) ks.push_back(k);
  } else {
    out.budget_exhausted = true;
    for (std::int64_t i = 0; i < budget; ++i) {
      std::int64_t k = budget == 1 ? 1 : 1 + (i * (K - 1)) / (budget - 1);
      if (ks.empty() || ks.back() != k) ks.push_back(k);
    }
  }
  std::int64_t lo = nb.minus;
  for (std::int64_t k : ks) {
    std::int64_t N = first_reaching(c, L, k, lo);
    lo = N;
    out.points.push_back({N, k, static_cast<double>(aL * DoubleDouble(static_cast<double>(k)))});
  }
  return out;
}

}  // namespace gsum
