#pragma once

#include <cstddef>
#include <cstdint>
#include <cmath>
#include <random>

#include "wavecascade/grid.hpp"

namespace wctest {

// Random nonnegative state. Some nodes are zeroed so that sparse spectra get
// exercised as well.
inline wavecascade::SpectrumState random_state(std::size_t n, std::uint64_t seed,
                                               double zero_fraction = 0.2) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  wavecascade::SpectrumState s;
  s.g.resize(n);
  for (auto& g : s.g) g = u(rng) < zero_fraction ? 0.0 : u(rng);
  return s;
}

// x^p by binary expansion of p = k / 2^bits: repeated squaring for the
// integer part, repeated square roots for the fraction.
inline double pow_by_squaring(double x, double p, int bits = 40) {
  auto ipow = [](double b, unsigned long long e) {
    double r = 1.0;
    while (e) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  };
  const auto whole = static_cast<unsigned long long>(p);
  double frac = p - static_cast<double>(whole);
  double result = ipow(x, whole);
  double root = x;
  for (int k = 0; k < bits && frac > 0.0; ++k) {
    root = std::sqrt(root);
    frac *= 2.0;
    if (frac >= 1.0) {
      result *= root;
      frac -= 1.0;
    }
  }
  return result;
}

// Plain bisection for an increasing function.
template <class F>
double bisect(F f, double target, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace wctest
