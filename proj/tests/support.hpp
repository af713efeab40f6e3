#pragma once

// Constructions shared by the unit tests and the acceptance runner.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "gsum/renorm.hpp"

namespace gsum::testing {

/// [0; k_1, k_2, ..., k_n + tail] evaluated from the bottom up.
inline double from_continued_fraction(const std::vector<std::int64_t>& k, double tail) {
  double x = tail;
  for (auto it = k.rbegin(); it != k.rend(); ++it) x = 1.0 / (static_cast<double>(*it) + x);
  return x;
}

/// A b whose cascade reaches b_L = target at level L. Each backward step
/// b_l = a_l ([1/a_l]/2 - b_{l+1} + m) has about 1/a_l admissible integers m;
/// one is drawn at random.
inline double b_for_level(double a, int L, double target, std::mt19937_64& rng) {
  GaussCascade c(a);
  DoubleDouble b(target);
  for (int l = L - 1; l >= 0; --l) {
    const DoubleDouble al = c.a(l);
    const DoubleDouble half_whole = floor(DoubleDouble(1.0) / al) * DoubleDouble(0.5);
    const DoubleDouble base = half_whole - b;  // b_l / a_l = base + m
    // admissible m: -1/2 < a_l (base + m) <= 1/2
    const double lo = std::floor(static_cast<double>(DoubleDouble(-0.5) / al - base)) + 1.0;
    const double hi = std::floor(static_cast<double>(DoubleDouble(0.5) / al - base));
    std::uniform_int_distribution<std::int64_t> dm(static_cast<std::int64_t>(lo),
                                                   static_cast<std::int64_t>(std::max(lo, hi)));
    b = al * (base + DoubleDouble(static_cast<double>(dm(rng))));
  }
  return static_cast<double>(b);
}

/// a ~ m: a = 2^u - 1, b uniform on (-1/2, 1/2].
inline Params draw_m(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a;
  do a = std::exp2(u(rng)) - 1.0;
  while (!(a > 0.0 && a < 1.0));
  return {a, 0.5 - u(rng)};
}

}  // namespace gsum::testing
