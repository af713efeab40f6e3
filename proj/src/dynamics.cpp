#include "gsum/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "gsum/error.hpp"
#include "gsum/quadrature.hpp"
#include "gsum/renorm.hpp"

namespace gsum {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void check_a(double a, const char* who) {
  if (!(a > 0.0 && a < 1.0)) fail(ErrorKind::domain, std::string(who) + ": a must lie in (0,1)");
}

// Length of [lo, hi] inside [x, y].
double overlap(double lo, double hi, double x, double y) {
  return std::max(0.0, std::min(hi, y) - std::max(lo, x));
}

// Runs fn(chunk, begin, end) over chunks of `total` items on `threads`
// workers; the results come back in chunk order.
template <class R, class F>
std::vector<R> run_chunks(std::int64_t total, std::int64_t chunk, int threads, F fn) {
  const std::int64_t count = (total + chunk - 1) / chunk;
  std::vector<R> out(static_cast<std::size_t>(count));
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<std::int64_t>(threads, std::max<std::int64_t>(count, 1)));
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (std::int64_t c = next++; c < count; c = next++) {
      const std::int64_t begin = c * chunk;
      out[static_cast<std::size_t>(c)] = fn(c, begin, std::min(total, begin + chunk));
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

struct Moments {
  double sum = 0.0, sum_sq = 0.0;
  std::int64_t n = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  void merge(const Moments& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    n += o.n;
  }
  Estimate estimate() const {
    Estimate e;
    if (n == 0) return e;
    const double dn = static_cast<double>(n);
    e.mean = sum / dn;
    const double var = n > 1 ? std::max(0.0, (sum_sq - sum * e.mean) / (dn - 1.0)) : 0.0;
    e.se = std::sqrt(var / dn);
    return e;
  }
};

double gauss_draw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a;
  do a = std::exp2(u(rng)) - 1.0;
  while (!(a > 0.0 && a < 1.0));
  return a;
}

// Parity of an integer-valued double-double.
bool dd_is_odd(const DoubleDouble& x) {
  const double p = std::fmod(x.hi, 2.0) + std::fmod(x.lo, 2.0);
  return std::fmod(std::abs(p), 2.0) == 1.0;
}

int mod2(std::int64_t x) { return static_cast<int>(((x % 2) + 2) % 2); }

double circle_distance(double x, double y) { return std::abs(frac0(x - y)); }

double symbol_value(BSymbol s, double a) {
  switch (s) {
    case BSymbol::zero: return 0.0;
    case BSymbol::half: return 0.5;
    case BSymbol::plus_half_a: return 0.5 * a;
    case BSymbol::minus_half_a: return -0.5 * a;
    case BSymbol::other: break;
  }
  return std::nan("");
}

}  // namespace

// -- two-level densities ---------------------------------------------------

double PiecewiseDensity::integral(double lo, double hi) const {
  if (hi <= lo) return 0.0;
  const double inner = overlap(-a / 2, a / 2, lo, hi);
  return A * inner + B * ((hi - lo) - inner);
}

TransferMatrix::TransferMatrix(double a) {
  check_a(a, "TransferMatrix");
  a1 = frac(1.0 / a);
  S << a, 1.0 - a * a1, a, 1.0 - a - a * a1;
}

PiecewiseDensity pf_apply_family(const PiecewiseDensity& d) {
  TransferMatrix T(d.a);
  if (!(T.a1 > 0.0)) fail(ErrorKind::domain, "pf_apply_family: {1/a} vanished");
  Eigen::Vector2d AB = T.apply(Eigen::Vector2d(d.A, d.B));
  return {T.a1, AB(0), AB(1)};
}

std::vector<PiecewiseDensity> iterate_family(PiecewiseDensity d, int steps) {
  std::vector<PiecewiseDensity> out{d};
  for (int i = 0; i < steps; ++i) out.push_back(d = pf_apply_family(d));
  return out;
}

double SampledDensity::mass() const {
  double s = 0.0;
  for (double c : cells) s += c;
  return s * width();
}

double SampledDensity::cumulative(double x) const {
  const double h = width();
  const double pos = std::clamp((x + 0.5) / h, 0.0, static_cast<double>(cells.size()));
  const auto full = static_cast<std::size_t>(pos);
  double s = 0.0;
  for (std::size_t j = 0; j < full; ++j) s += cells[j];
  s *= h;
  if (full < cells.size()) s += cells[full] * (pos - static_cast<double>(full)) * h;
  return s;
}

SampledDensity SampledDensity::from_function(
    const std::function<double(double, double)>& cell_integral, std::size_t n) {
  if (n == 0) fail(ErrorKind::domain, "sampled density needs at least one cell");
  SampledDensity d;
  d.cells.resize(n);
  const double h = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = -0.5 + static_cast<double>(j) * h;
    d.cells[j] = cell_integral(lo, lo + h) / h;
  }
  return d;
}

SampledDensity sample(const PiecewiseDensity& d, std::size_t n) {
  return SampledDensity::from_function([&](double lo, double hi) { return d.integral(lo, hi); }, n);
}

SampledDensity pf_apply_grid(const SampledDensity& f, double a) {
  check_a(a, "pf_apply_grid");
  if (static_cast<double>(f.size()) < 2.0 / a) fail(ErrorKind::domain, "resolution-too-coarse");
  // prefix sums of the cell masses give the cumulative in O(1); they are
  // kept in double-double so that differences of nearby values stay exact
  const double h = f.width();
  std::vector<DoubleDouble> prefix(f.size() + 1);
  for (std::size_t j = 0; j < f.size(); ++j) prefix[j + 1] = prefix[j] + dd_detail::two_prod(f.cells[j], h);
  const DoubleDouble n(static_cast<double>(f.size()));
  auto F = [&](const DoubleDouble& x) {
    const DoubleDouble pos = (x + DoubleDouble(0.5)) * n;
    if (pos.hi <= 0.0) return DoubleDouble(0.0);
    if (pos >= n) return prefix.back();
    const auto full = static_cast<std::size_t>(floor(pos).hi);
    return prefix[full] + DoubleDouble(f.cells[full] * static_cast<double>(pos - DoubleDouble(static_cast<double>(full))) * h);
  };

  // b1 = c - b/a + m, so the preimage of [y0, y1] for shift m is
  // b in [a (c + m - y1), a (c + m - y0)]
  const double c = std::floor(1.0 / a) / 2.0;
  const std::int64_t m_lo = static_cast<std::int64_t>(std::floor(-0.5 / a - c)) - 1;
  const std::int64_t m_hi = static_cast<std::int64_t>(std::ceil(0.5 / a - c)) + 1;
  const DoubleDouble half(0.5), ad(a);
  return SampledDensity::from_function(
      [&](double y0, double y1) {
        DoubleDouble s;
        for (std::int64_t m = m_lo; m <= m_hi; ++m) {
          const DoubleDouble shift(c + static_cast<double>(m));
          const DoubleDouble lo = std::max(-half, ad * (shift - DoubleDouble(y1)));
          const DoubleDouble hi = std::min(half, ad * (shift - DoubleDouble(y0)));
          if (hi > lo) s += F(hi) - F(lo);
        }
        return static_cast<double>(s);
      },
      f.size());
}

// -- A_l, B_l ---------------------------------------------------------------

ABSequences iterate_AB(const std::vector<double>& a_seq, double B0) {
  if (a_seq.empty()) fail(ErrorKind::domain, "iterate_AB needs a_0");
  for (double a : a_seq) check_a(a, "iterate_AB");
  const std::size_t n = a_seq.size();
  ABSequences out;
  out.A.resize(n);
  out.B.resize(n);
  out.A_closed.resize(n);
  out.B_closed.resize(n);
  out.B[0] = B0;
  out.A[0] = (1.0 - (1.0 - a_seq[0]) * B0) / a_seq[0];
  for (std::size_t l = 1; l < n; ++l) {
    const double ap = a_seq[l - 1], al = a_seq[l];
    out.A[l] = ap * out.A[l - 1] + (1.0 - ap * al) * out.B[l - 1];
    out.B[l] = ap * out.A[l - 1] + (1.0 - ap - ap * al) * out.B[l - 1];
  }

  // B_l = 1 - sum_{m=0}^{l-2} (-1)^m prod_{n=l-m}^{l} a_n a_{n-1} + (-1)^l prod_{n=1}^{l} a_n a_{n-1} B_0
  auto p = [&](std::size_t k) { return a_seq[k] * a_seq[k - 1]; };
  out.B_closed[0] = B0;
  out.A_closed[0] = out.A[0];
  for (std::size_t l = 1; l < n; ++l) {
    double s = 1.0, prod = 1.0, sign = 1.0;
    for (std::size_t m = 0; m + 2 <= l; ++m) {
      prod *= p(l - m);
      s -= sign * prod;
      sign = -sign;
    }
    prod *= p(1);
    s += (l % 2 == 0 ? 1.0 : -1.0) * prod * B0;
    out.B_closed[l] = s;
    out.A_closed[l] = s + a_seq[l - 1] * out.B_closed[l - 1];
  }
  return out;
}

std::vector<double> gauss_orbit(double a, int n) {
  check_a(a, "gauss_orbit");
  GaussCascade c(a);
  std::vector<double> out;
  for (int l = 0; l <= n; ++l) {
    const double al = static_cast<double>(c.a(l));
    if (c.zero_level() && *c.zero_level() <= l) fail(ErrorKind::domain, "gauss_orbit: a is rational at working precision");
    out.push_back(al);
  }
  return out;
}

// -- the box family ------------------------------------------------------

double SecondFamily::integral(double lo, double hi) const {
  return height * overlap(-half_width, half_width, lo, hi);
}

SecondFamily second_family(double a, std::int64_t M) {
  check_a(a, "second_family");
  const double whole = std::floor(1.0 / a);
  const double a1 = 1.0 / a - whole;
  const bool even = std::fmod(whole, 2.0) == 0.0;
  const double limit = even ? whole / 2.0 : (whole + 1.0) / 2.0;
  if (M < 1 || static_cast<double>(M) > limit) fail(ErrorKind::domain, "M-out-of-range");
  // the odd case is the even one with 2M replaced by 2M - 1
  const double twoM = even ? 2.0 * static_cast<double>(M) : 2.0 * static_cast<double>(M) - 1.0;
  SecondFamily s;
  s.a = a;
  s.M = M;
  s.half_width = a * (twoM - a1) / 2.0;
  s.height = 1.0 / (a * (twoM - a1));
  s.image = {a1, 1.0 - (1.0 - a1) / (twoM - a1), 1.0 + a1 / (twoM - a1)};
  return s;
}

// -- Monte Carlo under m ---------------------------------------------------

Params sample_m(std::mt19937_64& rng) {
  const double a = gauss_draw(rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {a, 0.5 - u(rng)};
}

Params skew_step(const Params& p, std::mt19937_64& rng) {
  const double inv = 1.0 / p.a;
  const double whole = std::floor(inv);
  const double a1 = inv - whole;
  if (!(a1 > 0.0 && a1 < 1.0)) return sample_m(rng);
  return {a1, frac0(whole / 2.0 - p.b / p.a)};
}

std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Threshold power_threshold(double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(l+2)^-%g", p);
  return {buf, [p](int l) { return std::pow(static_cast<double>(l) + 2.0, -p); }};
}

double counting_reference(int L, const Threshold& phi) {
  double s = 0.0;
  for (int l = 0; l <= L; ++l) s += std::pow(phi.phi(l), 6);
  return 2.0 / kLn2 * s;
}

CountingStats counting_norms(int L, const Threshold& phi, std::int64_t samples, std::uint64_t seed,
                             const std::vector<int>& checkpoints, int threads) {
  if (L < 0 || samples < 2) fail(ErrorKind::domain, "counting_norms needs L >= 0 and at least two samples");
  std::vector<int> cps;
  for (int c : checkpoints)
    if (c >= 0 && c <= L) cps.push_back(c);
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());

  // a_l^(1/4) <= phi  <=>  a_l <= phi^4,  |b_l|^(1/2) <= phi  <=>  |b_l| <= phi^2
  std::vector<double> a_cut(L + 1), b_cut(L + 1);
  for (int l = 0; l <= L; ++l) {
    const double f = phi.phi(l);
    b_cut[l] = f * f;
    a_cut[l] = b_cut[l] * b_cut[l];
  }

  struct Part {
    Moments n, n_sq;
    std::vector<Moments> cp;
  };
  constexpr std::int64_t kChunk = 512;
  auto parts = run_chunks<Part>(samples, kChunk, threads, [&](std::int64_t c, std::int64_t begin, std::int64_t end) {
    Part part;
    part.cp.resize(cps.size());
    auto rng = chunk_engine(seed, static_cast<std::uint64_t>(c));
    for (std::int64_t s = begin; s < end; ++s) {
      Params p = sample_m(rng);
      std::int64_t count = 0;
      std::size_t next_cp = 0;
      for (int l = 0; l <= L; ++l) {
        if (p.a <= a_cut[l] && std::abs(p.b) <= b_cut[l]) ++count;
        while (next_cp < cps.size() && cps[next_cp] == l) part.cp[next_cp++].add(static_cast<double>(count));
        if (l < L) p = skew_step(p, rng);
      }
      const double x = static_cast<double>(count);
      part.n.add(x);
      part.n_sq.add(x * x);
    }
    return part;
  });

  Moments n, n_sq;
  std::vector<Moments> cp(cps.size());
  for (const Part& part : parts) {
    n.merge(part.n);
    n_sq.merge(part.n_sq);
    for (std::size_t i = 0; i < cps.size(); ++i) cp[i].merge(part.cp[i]);
  }
  CountingStats out;
  out.L = L;
  out.phi = phi.name;
  out.samples = samples;
  out.norm1 = n.estimate();
  out.norm2_sq = n_sq.estimate();
  out.norm2.mean = std::sqrt(out.norm2_sq.mean);
  out.norm2.se = out.norm2.mean > 0.0 ? out.norm2_sq.se / (2.0 * out.norm2.mean) : 0.0;
  for (std::size_t i = 0; i < cps.size(); ++i) out.checkpoints.emplace_back(cps[i], cp[i].estimate());
  return out;
}

double log_n_minus(const std::vector<double>& a_seq, int L) {
  if (L < 0 || static_cast<std::size_t>(L) > a_seq.size()) fail(ErrorKind::domain, "log_n_minus needs L a_l values");
  double m = 1.0;
  double log_m = 0.0;
  bool logs = false;
  for (int l = L - 1; l >= 0; --l) {
    check_a(a_seq[l], "log_n_minus");
    if (logs) {
      log_m -= std::log(a_seq[l]);
      continue;
    }
    const double q = m / a_seq[l];
    if (q < 0x1p52) {
      m = std::ceil(q);
    } else {
      logs = true;
      log_m = std::log(q);
    }
  }
  return logs ? log_m : std::log(m);
}

double birkhoff_constant_quadrature() {
  // a = e^-t turns the log singularity into t e^-t / (1 + e^-t) on [0, inf)
  auto g = [](double t) { return std::complex<double>(t * std::exp(-t) / (1.0 + std::exp(-t)), 0.0); };
  const QuadResult r = integrate(g, 0.0, 80.0, 1e-13);
  return r.value.real() / kLn2;
}

BirkhoffStats birkhoff_A(std::int64_t samples, int L, std::uint64_t seed, int threads) {
  if (L < 1 || samples < 2) fail(ErrorKind::domain, "birkhoff_A needs L >= 1 and at least two samples");
  struct Part {
    Moments birk, logn;
  };
  auto parts = run_chunks<Part>(samples, 256, threads, [&](std::int64_t c, std::int64_t begin, std::int64_t end) {
    Part part;
    auto rng = chunk_engine(seed, static_cast<std::uint64_t>(c));
    std::vector<double> seq(static_cast<std::size_t>(L));
    for (std::int64_t s = begin; s < end; ++s) {
      Params p = sample_m(rng);
      double sum = 0.0;
      for (int l = 0; l < L; ++l) {
        seq[l] = p.a;
        sum -= std::log(p.a);
        p = skew_step(p, rng);
      }
      part.birk.add(sum / L);
      part.logn.add(log_n_minus(seq, L) / L);
    }
    return part;
  });
  Moments birk, logn;
  for (const Part& part : parts) {
    birk.merge(part.birk);
    logn.merge(part.logn);
  }
  return {birk.estimate(), logn.estimate(), birkhoff_constant_quadrature()};
}

// -- orbits of b in {(m a + n)/2}_0 -----------------------------------------

BSymbol table_next(BSymbol s, bool parity_even) {
  switch (s) {
    case BSymbol::zero: return parity_even ? BSymbol::zero : BSymbol::half;
    case BSymbol::half: return BSymbol::minus_half_a;
    case BSymbol::plus_half_a:
    case BSymbol::minus_half_a: return parity_even ? BSymbol::half : BSymbol::zero;
    case BSymbol::other: break;
  }
  return BSymbol::other;
}

BaOrbit ba_orbit(double a, std::int64_t m, std::int64_t n, int jmax) {
  check_a(a, "ba_orbit");
  if (mod2(m) == 1 && mod2(n) == 1) fail(ErrorKind::domain, "ba_orbit: m and n both odd");
  if (jmax < 0) fail(ErrorKind::domain, "ba_orbit: jmax must be nonnegative");
  if (std::abs(m) > (std::int64_t{1} << 40) || std::abs(n) > (std::int64_t{1} << 40))
    fail(ErrorKind::domain, "ba_orbit: |m|, |n| must stay below 2^40");

  BaOrbit out;
  DoubleDouble aj(a);
  std::int64_t nj = m;
  const DoubleDouble fl0 = floor(mul_int(m, aj));
  int eps = mod2(n + static_cast<std::int64_t>(fl0.hi) + static_cast<std::int64_t>(fl0.lo));
  double b_free = static_cast<double>(frac0((mul_int(m, aj) + DoubleDouble(static_cast<double>(n))) * DoubleDouble(0.5)));
  double b_prev_exact = 0.0;
  DoubleDouble a_prev;

  for (int j = 0; j <= jmax; ++j) {
    BaPoint pt;
    pt.j = j;
    pt.n = nj;
    pt.epsilon = eps;
    pt.a = static_cast<double>(aj);
    const DoubleDouble na = mul_int(nj, aj);
    const DoubleDouble fl = floor(na);
    pt.b_exact = static_cast<double>(frac0((na - fl - DoubleDouble(static_cast<double>(eps))) * DoubleDouble(0.5)));
    const DoubleDouble whole = floor(DoubleDouble(1.0) / aj);
    pt.parity_even = !dd_is_odd(whole);
    if (nj == 0) pt.symbol = eps == 0 ? BSymbol::zero : BSymbol::half;
    else if (nj == 1 && eps == 0) pt.symbol = BSymbol::plus_half_a;
    else if (nj == -1 && eps == 1) pt.symbol = BSymbol::minus_half_a;

    if (j == 0) {
      pt.b_step = pt.b_exact;
    } else {
      pt.b_step = static_cast<double>(gauss_step(a_prev, DoubleDouble(b_prev_exact)).b);
      out.max_step_mismatch = std::max(out.max_step_mismatch, circle_distance(pt.b_step, pt.b_exact));
      b_free = static_cast<double>(gauss_step(a_prev, DoubleDouble(b_free)).b);
    }
    pt.b_free = b_free;
    if (!out.free_departure && circle_distance(b_free, pt.b_exact) > 1e-9) out.free_departure = j;
    if (!out.j0 && std::abs(nj) <= 1) out.j0 = j;

    if (out.j0 && j > *out.j0) {
      const bool in_set = pt.symbol == BSymbol::zero || pt.symbol == BSymbol::half ||
                          pt.symbol == BSymbol::minus_half_a;
      if (!in_set || circle_distance(pt.b_step, symbol_value(pt.symbol, pt.a)) > 1e-9) out.membership = false;
      const BaPoint& prev = out.points.back();
      if (table_next(prev.symbol, prev.parity_even) != pt.symbol) out.table_consistent = false;
    }
    out.points.push_back(pt);
    if (j == jmax) break;

    // n_{j+1} = [a_j n_j] + eps_j; eps_{j+1} = K + [n_{j+1} a_{j+1}] mod 2 with
    // K = (n_{j+1} + 1)[1/a_j] - n_j
    const GaussStepResult g = gauss_step(aj, DoubleDouble(0.0));
    if (g.terminated) break;
    // b_j = 1/2 is written as (0 - 0 - 1)/2 + 1; the extra 1 shifts n_{j+1} by -2
    std::int64_t n_next = static_cast<std::int64_t>(fl.hi) + static_cast<std::int64_t>(fl.lo) + eps;
    if (nj == 0 && eps == 1) n_next -= 2;
    const int K = (mod2(n_next + 1) * (pt.parity_even ? 0 : 1) + mod2(nj)) % 2;
    const DoubleDouble fl_next = floor(mul_int(n_next, g.a));
    eps = (K + mod2(static_cast<std::int64_t>(fl_next.hi) + static_cast<std::int64_t>(fl_next.lo))) % 2;
    b_prev_exact = pt.b_exact;
    a_prev = aj;
    aj = g.a;
    nj = n_next;
  }
  if (!out.j0) {
    out.membership = false;
    out.table_consistent = false;
  }
  return out;
}

// -- the coding map on [0, 3] --------------------------------------------

double tilde_map(double x) {
  if (!(x > 0.0 && x < 3.0) || x == 1.0 || x == 2.0)
    fail(ErrorKind::domain, "tilde_map: x must lie in (0,3) away from 1 and 2");
  const int branch = x < 1.0 ? 0 : (x < 2.0 ? 1 : 2);
  const double y = 1.0 / (x - branch);
  const double k = std::floor(y);
  const double f = y - k;
  const bool even = std::fmod(k, 2.0) == 0.0;
  switch (branch) {
    case 0: return f + (even ? 0.0 : 2.0);
    case 1: return f + (even ? 2.0 : 0.0);
    default: return f + 1.0;
  }
}

double tilde_decode_b(double x) {
  if (!(x >= 0.0 && x < 3.0)) fail(ErrorKind::domain, "tilde_decode_b: x must lie in [0,3)");
  if (x < 1.0) return 0.0;
  if (x < 2.0) return -0.5 * (x - 1.0);
  return 0.5;
}

double nu_density(double x) {
  if (!(x >= 0.0 && x <= 3.0)) return 0.0;
  const double i = std::min(std::floor(x), 2.0);
  return 1.0 / (3.0 * kLn2 * (x - i + 1.0));
}

double nu_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 3.0) return 1.0;
  const double i = std::floor(x);
  return (i + std::log2(1.0 + x - i)) / 3.0;
}

double sample_nu(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 2);
  const int i = pick(rng);
  return i + gauss_draw(rng);
}

double parity_series_of_one(double x, bool odd, double tol) {
  if (!(x >= 0.0 && x <= 1.0)) fail(ErrorKind::domain, "parity_series_of_one: x must lie in [0,1]");
  // h(k) = 1/((2k + c)(2k + 1 + c)) for k >= 1
  const double c = odd ? x - 1.0 : x;
  auto h = [c](double k) { return 1.0 / (2 * k + c) - 1.0 / (2 * k + 1 + c); };
  auto tail = [c, &h](double k) {
    const double u = 2 * k + c, v = 2 * k + 1 + c;
    const double d1 = -2.0 / (u * u) + 2.0 / (v * v);
    const double d3 = -48.0 / std::pow(u, 4) + 48.0 / std::pow(v, 4);
    return 0.5 * std::log1p(1.0 / u) + h(k) / 2 - d1 / 12 + d3 / 720;
  };
  // the first omitted Euler-Maclaurin term is about 3840/(2K)^6 / 30240
  std::int64_t K = 16;
  while (3840.0 / std::pow(2.0 * static_cast<double>(K) + c, 6) / 30240.0 > tol) {
    K *= 2;
    if (K > (std::int64_t{1} << 24)) fail(ErrorKind::series_truncation, "series-truncation-insufficient");
  }
  double s = 0.0;
  for (std::int64_t k = K; k >= 1; --k) s += 1.0 / ((2.0 * k + c) * (2.0 * k + 1 + c));
  return s + tail(static_cast<double>(K + 1));
}

double tilde_P1(double y) {
  if (!(y > 0.0 && y < 3.0) || y == 1.0 || y == 2.0)
    fail(ErrorKind::domain, "tilde_P1: y must lie in (0,3) away from 1 and 2");
  const int target = static_cast<int>(std::floor(y));
  const double f = y - target;
  // preimages x = i + 1/(n + f) on branch i; which parity of n lands on the
  // target interval follows the branch offsets of tilde_map
  auto lands = [](int branch, bool n_even) {
    switch (branch) {
      case 0: return n_even ? 0 : 2;
      case 1: return n_even ? 2 : 0;
      default: return 1;
    }
  };
  // weight nu(x)/|T'(x)|/nu(y) = (1 + f)/((n + f)(n + f + 1)); the even n >= 2
  // and odd n >= 1 sums are the two parity series
  const double even = parity_series_of_one(f, false);
  const double odd = parity_series_of_one(f, true);
  double s = 0.0;
  for (int branch = 0; branch < 3; ++branch) {
    if (lands(branch, true) == target) s += even;
    if (lands(branch, false) == target) s += odd;
  }
  return (1.0 + f) * s;
}

InvarianceReport tilde_invariance_check(std::int64_t samples, std::uint64_t seed, int grid_points,
                                        double event_threshold) {
  if (samples < 2 || grid_points < 1) fail(ErrorKind::domain, "tilde_invariance_check needs samples and grid points");
  InvarianceReport r;
  r.samples = samples;

  auto rng = chunk_engine(seed, 0);
  std::vector<double> pushed;
  pushed.reserve(static_cast<std::size_t>(samples));
  for (std::int64_t s = 0; s < samples; ++s) {
    double x;
    do x = sample_nu(rng);
    while (x == 1.0 || x == 2.0);
    pushed.push_back(tilde_map(x));
  }
  std::sort(pushed.begin(), pushed.end());
  const double n = static_cast<double>(samples);
  for (std::size_t i = 0; i < pushed.size(); ++i) {
    const double F = nu_cdf(pushed[i]);
    r.ks_distance = std::max({r.ks_distance, (static_cast<double>(i) + 1.0) / n - F, F - static_cast<double>(i) / n});
  }

  for (int j = 0; j < grid_points; ++j) {
    const double y = 3.0 * (j + 0.5) / grid_points;
    if (y == 1.0 || y == 2.0) continue;
    r.grid.push_back(y);
    r.P1.push_back(tilde_P1(y));
    r.max_P1_deviation = std::max(r.max_P1_deviation, std::abs(r.P1.back() - 1.0));
    const double x = (j + 0.5) / grid_points;
    const double gauss = (1.0 + x) * (parity_series_of_one(x, false) + parity_series_of_one(x, true));
    r.max_gauss_deviation = std::max(r.max_gauss_deviation, std::abs(gauss - 1.0));
  }

  // correlations of the event x_l < t along orbits started from nu
  constexpr int kLags = 20;
  const std::int64_t orbits = std::max<std::int64_t>(samples / 10, 2);
  auto rng2 = chunk_engine(seed, 1);
  std::vector<double> p(kLags + 1, 0.0), joint(kLags + 1, 0.0);
  for (std::int64_t s = 0; s < orbits; ++s) {
    double x;
    do x = sample_nu(rng2);
    while (x == 1.0 || x == 2.0);
    bool e0 = false;
    for (int l = 0; l <= kLags; ++l) {
      const bool e = x < event_threshold;
      if (l == 0) e0 = e;
      p[l] += e;
      joint[l] += e0 && e;
      if (l == kLags) break;
      const double frac_part = x - std::floor(x);
      // a pseudo-orbit landing on a seam restarts from nu
      if (frac_part == 0.0) {
        do x = sample_nu(rng2);
        while (x == 1.0 || x == 2.0);
      } else {
        x = tilde_map(x);
      }
    }
  }
  const double no = static_cast<double>(orbits);
  r.event_probability = p[0] / no;
  std::vector<double> lags, logs;
  for (int l = 1; l <= kLags; ++l) {
    const double cov = joint[l] / no - (p[0] / no) * (p[l] / no);
    r.lag_covariance.push_back(cov);
    // only covariances well above the sampling noise enter the fit
    if (std::abs(cov) > 3.0 * std::sqrt(r.event_probability / no)) {
      lags.push_back(l);
      logs.push_back(std::log(std::abs(cov)));
    }
  }
  if (lags.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lags.size(); ++i) mx += lags[i], my += logs[i];
    mx /= lags.size();
    my /= lags.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lags.size(); ++i) {
      sxy += (lags[i] - mx) * (logs[i] - my);
      sxx += (lags[i] - mx) * (lags[i] - mx);
    }
    r.decay_rate = -sxy / sxx;
  }
  return r;
}

}  // namespace gsum
