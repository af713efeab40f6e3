#include <cmath>
#include <random>

#include "doctest.h"
#include "gsum/asymptotics.hpp"
#include "support.hpp"

using namespace gsum;
using namespace gsum::testing;

namespace {

struct Sample {
  Params p;
  int L;
  std::int64_t N;
};

// a = [0; k_1..k_L, big, ...] so that a_L < 1/big, and N drawn from the
// range where the cascade depth is exactly L.
Sample small_aL_sample(std::mt19937_64& rng, std::int64_t big_lo, std::int64_t big_hi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> dk(1, 4), dbig(big_lo, big_hi);
  std::uniform_int_distribution<int> dl(1, 4);
  for (;;) {
    const int L = dl(rng);
    std::vector<std::int64_t> k;
    for (int j = 0; j < L; ++j) k.push_back(dk(rng));
    k.push_back(dbig(rng));
    const double a = from_continued_fraction(k, u(rng));
    NBounds nb = n_bounds(L, a);
    if (!nb.plus) continue;
    std::uniform_int_distribution<std::int64_t> dn(nb.minus, *nb.plus);
    return {{a, 0.5 - u(rng)}, L, dn(rng)};
  }
}

Complex conj_if(bool odd, Complex z) { return odd ? std::conj(z) : z; }

}  // namespace

TEST_CASE("Fresnel integral helpers") {
  CHECK(std::abs(fresnel_integral(-40.0, 40.0) - unit_exp(-0.125)) < 1e-2);
  CHECK(std::abs(fresnel_upper(-1e9) - unit_exp(-0.125)) < 1e-9);
  for (double x : {-3.0, -0.7, 0.0, 0.4, 2.5}) {
    for (double y : {-2.0, 0.1, 1.7, 6.0}) {
      Complex direct = fresnel_F(y).value - fresnel_F(x).value;
      CHECK(std::abs(fresnel_integral(x, y) - direct) < 1e-14);
    }
    CHECK(std::abs(fresnel_upper(x) + fresnel_F(x).value - unit_exp(-0.125)) < 1e-14);
  }
}

TEST_CASE("leading term tracks the sum in both regimes") {
  std::mt19937_64 rng(41);
  double worst[2] = {0.0, 0.0};
  int count[2] = {0, 0};
  for (int i = 0; i < 1000; ++i) {
    Sample s = small_aL_sample(rng, 100, 1000);
    AsymptoticValue av = asymptotic_sum(s.N, s.p);
    REQUIRE(av.L == s.L);
    REQUIRE(av.a_L <= 1e-2);
    REQUIRE((av.regime == Regime::below_half) == (av.xi_L - av.b_L <= 0.5));
    Complex exact = renorm_sum(s.N, s.p);
    const int r = av.regime == Regime::above_half;
    worst[r] = std::max(worst[r], std::abs(av.value - exact) / av.err_order);
    ++count[r];
  }
  MESSAGE("|asymptotic - S| / err_order, below 1/2: " << worst[0] << " over " << count[0]
                                                      << "; above: " << worst[1] << " over " << count[1]);
  CHECK(count[0] > 100);
  CHECK(count[1] > 100);
  CHECK(worst[0] < 10.0);
  CHECK(worst[1] < 10.0);

  // a subset against direct summation
  for (int i = 0; i < 40; ++i) {
    Sample s = small_aL_sample(rng, 100, 300);
    if (s.N > 200000) continue;
    AsymptoticValue av = asymptotic_sum(s.N, s.p);
    CHECK(std::abs(av.value - naive_sum(s.N, s.p)) < 10.0 * av.err_order);
  }
}

TEST_CASE("above-half phase: 1/a_L, not 1/(2 a_L)") {
  // The variant with 2 a_L in the denominator misses the sum by many times
  // err_order on the same samples.
  std::mt19937_64 rng(43);
  double worst_alt = 0.0;
  for (int i = 0; i < 300; ++i) {
    Sample s = small_aL_sample(rng, 100, 1000);
    CascadeLevels cl = cascade_levels(s.N, s.p);
    const RenormStep& st = cl.steps.back();
    if (st.xi - st.b <= DoubleDouble(0.5)) continue;
    const double sa = std::sqrt(static_cast<double>(st.a));
    Complex alt = fresnel_upper(-static_cast<double>(st.b) / sa) +
                  unit_exp(frac0((st.b - st.xi + DoubleDouble(0.5)) / (st.a * DoubleDouble(2.0)))) *
                      fresnel_upper(static_cast<double>(DoubleDouble(1.0) - st.xi + st.b) / sa);
    double w = 1.0;
    for (const RenormStep& q : cl.steps) w *= static_cast<double>(q.a);
    Complex v = unit_exp(cl.theta_next) / std::sqrt(w) * conj_if(st.conj_odd, alt);
    AsymptoticValue av = asymptotic_sum(s.N, s.p);
    worst_alt = std::max(worst_alt, std::abs(v - renorm_sum(s.N, s.p)) / av.err_order);
  }
  MESSAGE("worst error of the 1/(2 a_L) variant in err_order units: " << worst_alt);
  CHECK(worst_alt > 20.0);
}

TEST_CASE("b_L = 0 specialization") {
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const int L = 1 + i % 3;
    std::vector<std::int64_t> k{2, 3, 1};
    k.resize(L);
    k.push_back(500);
    const double a = from_continued_fraction(k, u(rng));
    const double b = b_for_level(a, L, 0.0, rng);
    NBounds nb = n_bounds(L, a);
    const std::int64_t N = nb.minus + static_cast<std::int64_t>(u(rng) * (*nb.plus - nb.minus) / 4);
    AsymptoticValue av = asymptotic_sum(N, {a, b});
    REQUIRE(av.L == L);
    REQUIRE(std::abs(av.b_L) < 1e-9);
    CascadeLevels cl = cascade_levels(N, {a, b});
    double w = 1.0;
    for (const RenormStep& q : cl.steps) w *= static_cast<double>(q.a);
    Complex integral = fresnel_F(av.xi_L / std::sqrt(av.a_L)).value - 0.5 * unit_exp(-0.125);
    Complex expect = unit_exp(cl.theta_next) / std::sqrt(w) * conj_if(L % 2 == 1, integral);
    CHECK(av.regime == Regime::below_half);
    CHECK(std::abs(av.value - expect) < 1e-9 * std::abs(expect) + 1e-12);
  }
}

TEST_CASE("the two regimes agree at the seam") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double a : {1e-2, 1e-3, 1e-4, 1e-5}) {
    for (int i = 0; i < 50; ++i) {
      const DoubleDouble b(0.5 - u(rng)), aa(a);
      const DoubleDouble xi = b + DoubleDouble(0.5);  // xi - b = 1/2
      Complex lo = leading_bracket(xi, aa, b, Regime::below_half);
      Complex hi = leading_bracket(xi, aa, b, Regime::above_half);
      // they differ by twice the tail beyond 1/(2 sqrt a), about sqrt(a)/pi
      REQUIRE(std::abs(lo - hi) <= std::sqrt(a));
    }
  }
  // on realized sums either side of the seam: the first multiple k a_L with
  // k a_L - b_L > 1/2 is reached at N1, and N1 - 1 still sits below
  int crossings = 0;
  for (int i = 0; i < 40; ++i) {
    Sample s = small_aL_sample(rng, 300, 1000);
    CascadeLevels cl = cascade_levels(s.N, s.p);
    const double aL = static_cast<double>(cl.steps.back().a), bL = static_cast<double>(cl.steps.back().b);
    const auto k = static_cast<std::int64_t>(std::floor((0.5 + bL) / aL)) + 1;
    if (k * aL >= 1.0) continue;
    const std::int64_t N1 = first_reaching(s.L, s.p.a, k);
    if (N1 - 1 < n_bounds(s.L, s.p.a).minus) continue;
    AsymptoticValue v0 = asymptotic_sum(N1 - 1, s.p), v1 = asymptotic_sum(N1, s.p);
    REQUIRE(v0.L == s.L);
    REQUIRE(v1.L == s.L);
    REQUIRE(v0.regime == Regime::below_half);
    REQUIRE(v1.regime == Regime::above_half);
    ++crossings;
    Complex step = renorm_sum(N1, s.p) - renorm_sum(N1 - 1, s.p);
    CHECK(std::abs((v1.value - v0.value) - step) < 4.0 * (v0.err_order + v1.err_order));
  }
  CHECK(crossings > 20);
}

TEST_CASE("normalized magnitude against its leading-term prediction") {
  std::mt19937_64 rng(49);
  double worst = 0.0;
  for (int i = 0; i < 300; ++i) {
    Sample s = small_aL_sample(rng, 100, 1000);
    NormalizedMagnitude nm = normalized_mag(s.N, s.p);
    REQUIRE(nm.xi >= nm.a_L * (1 - 1e-12));
    REQUIRE(nm.exact <= std::sqrt(static_cast<double>(s.N)) + 1e-12);
    const double slack = std::abs(nm.exact - nm.prediction) - 4.0 * nm.a_L / nm.xi * nm.prediction;
    worst = std::max(worst, slack / std::sqrt(nm.a_L / nm.xi));
  }
  MESSAGE("empirical C in |exact - prediction| <= 4(a_L/xi) prediction + C sqrt(a_L/xi): " << worst);
  CHECK(worst < 5.0);

  // xi >= a_L holds already at N^-(L)
  for (int i = 0; i < 100; ++i) {
    Params p = draw_m(rng);
    const int L = 1 + i % 8;
    NBounds nb = n_bounds(L, p.a);
    NormalizedMagnitude nm = normalized_mag(nb.minus, p);
    CHECK(nm.xi >= nm.a_L * (1 - 1e-12));
  }
}

TEST_CASE("M(L) upper bound over random parameters") {
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<int> dl(1, 12);
  double sup = 0.0;
  for (int i = 0; i < 150; ++i) {
    Params p = draw_m(rng);
    GrowthBound g = M_of_L(dl(rng), p, {}, 1 << 12);
    REQUIRE(g.M > 0.0);
    REQUIRE(g.M <= g.bound_upper);
    sup = std::max(sup, g.M * g.key);
  }
  MESSAGE("sup M key: " << sup);
}

TEST_CASE("grid scan against the exact scan") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::int64_t big : {30, 300, 3000}) {
    for (int i = 0; i < 6; ++i) {
      const int L = 1 + i % 3;
      std::vector<std::int64_t> k;
      for (int j = 0; j < L; ++j) k.push_back(1 + static_cast<std::int64_t>(rng() % 3));
      k.push_back(big + static_cast<std::int64_t>(rng() % big));
      Params p{from_continued_fraction(k, u(rng)), 0.5 - u(rng)};
      GrowthBound exact = M_of_L(L, p, {}, 1 << 22);
      GrowthBound grid = M_of_L_grid(L, p);
      REQUIRE(exact.exact_scan);
      CHECK(grid.M <= exact.M * (1 + 1e-9));
      CHECK(grid.M >= exact.M * (1 - std::sqrt(std::sqrt(exact.a_L))));
    }
  }
}

TEST_CASE("M(L) for b_L = 0 and a_L near 1e-4") {
  // Leading term |int_0^u e(-tau^2/2)| / sqrt(u) at xi = u sqrt(a_L): M a_L^(1/4)
  // approaches its maximum over u.
  double gstar = 0.0;
  for (double u = 0.01; u < 6.0; u += 0.001) {
    Complex I = fresnel_F(u).value - 0.5 * unit_exp(-0.125);
    gstar = std::max(gstar, std::abs(I) / std::sqrt(u));
  }
  std::mt19937_64 rng(55);
  for (int L : {0, 2}) {
    std::vector<std::int64_t> k{3, 1};
    k.resize(L);
    k.push_back(10000);
    const double a = from_continued_fraction(k, 0.37);
    const double b = L == 0 ? 0.0 : b_for_level(a, L, 0.0, rng);
    GrowthBound g = M_of_L(L, {a, b}, {}, 1 << 20);
    MESSAGE("L=" << L << " a_L=" << g.a_L << " M=" << g.M << " M a_L^(1/4)=" << g.M * std::sqrt(std::sqrt(g.a_L))
                 << " max_u g=" << gstar);
    CHECK(g.exact_scan);
    CHECK(g.M >= 1.0);
    CHECK(g.M * std::sqrt(std::sqrt(g.a_L)) == doctest::Approx(gstar).epsilon(0.2));
  }
}

TEST_CASE("M(L) lower bound on constructed small keys") {
  std::mt19937_64 rng(57);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double floor_seen = 1e300;
  for (int i = 0; i < 6; ++i) {
    const int L = 1 + i % 3;
    std::vector<std::int64_t> k;
    for (int j = 0; j < L; ++j) k.push_back(1 + static_cast<std::int64_t>(rng() % 4));
    k.push_back(80000 + static_cast<std::int64_t>(rng() % 80000));
    const double a = from_continued_fraction(k, u(rng));
    const double b = b_for_level(a, L, (u(rng) - 0.5) * 0.003, rng);
    GrowthBound g = M_of_L(L, {a, b}, {}, 256);
    REQUIRE(g.key <= 0.1);
    REQUIRE(g.bound_lower.has_value());
    CHECK(g.M >= *g.bound_lower);
    CHECK(g.M <= g.bound_upper);
    floor_seen = std::min(floor_seen, g.M * g.key);
  }
  MESSAGE("min M key over small keys: " << floor_seen);
}
