#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "wavecascade/collision_kernel.hpp"
#include "wavecascade/errors.hpp"

using namespace wavecascade;
using std::numbers::pi;

TEST(SineIntegral, EqualRadii) {
  EXPECT_NEAR(min_identity(1, 1, 1, 1), pi / 4.0, 1e-15);
  EXPECT_NEAR(sine_integral_oracle(1, 1, 1, 1, 1e4).value, pi / 4.0, 1e-3);
}

TEST(SineIntegral, ZeroRadius) {
  EXPECT_EQ(min_identity(0, 2, 3, 4), 0.0);
  EXPECT_NEAR(sine_integral_oracle(0, 1, 1, 1, 1e4).value, 0.0, 1e-6);
}

TEST(SineIntegral, MixedQuadrupleOnTheBoundary) {
  // Sorted 0.5, 0.8, 1.2, 1.5: max + min equals the middle sum.
  EXPECT_TRUE(min_identity_holds(0.5, 1.5, 0.8, 1.2));
  EXPECT_NEAR(sine_integral_oracle(0.5, 1.5, 0.8, 1.2, 1e4).value, pi / 8.0, 1e-3);
  EXPECT_NEAR(min_identity(0.5, 1.5, 0.8, 1.2), pi / 8.0, 1e-15);
}

TEST(SineIntegral, MinReductionFailsOutsideItsRegion) {
  // 0.7 + 2.1 > 0.9 + 1.3: the integral is (pi/8)(0.7 + 0.9 + 1.3 - 2.1).
  EXPECT_FALSE(min_identity_holds(0.7, 2.1, 1.3, 0.9));
  EXPECT_THROW(min_identity(0.7, 2.1, 1.3, 0.9), DomainError);
  EXPECT_NEAR(eight_term_expansion(0.7, 2.1, 1.3, 0.9), pi / 10.0, 1e-14);
  EXPECT_NEAR(sine_integral_oracle(0.7, 2.1, 1.3, 0.9, 1e4).value, pi / 10.0, 1e-3);
  // The largest radius beats the sum of the others: the integral vanishes.
  EXPECT_NEAR(eight_term_expansion(1, 2, 3, 10), 0.0, 1e-14);
  EXPECT_NEAR(sine_integral_oracle(1, 2, 3, 10, 1e4).value, 0.0, 1e-3);
}

TEST(SineIntegral, EightTermIsSymmetric) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int k = 0; k < 1000; ++k) {
    std::array<double, 4> v = {u(rng), u(rng), u(rng), u(rng)};
    const double ref = eight_term_expansion(v[0], v[1], v[2], v[3]);
    std::sort(v.begin(), v.end());
    do {
      EXPECT_NEAR(eight_term_expansion(v[0], v[1], v[2], v[3]), ref, 1e-13);
    } while (std::next_permutation(v.begin(), v.end()));
  }
}

TEST(SineIntegral, EightTermPiecewiseForm) {
  // Sorted a <= b <= c <= d: (pi/4) a, (pi/8)(a + b + c - d) or 0.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int k = 0; k < 10'000; ++k) {
    std::array<double, 4> v = {u(rng), u(rng), u(rng), u(rng)};
    const double got = eight_term_expansion(v[0], v[1], v[2], v[3]);
    std::sort(v.begin(), v.end());
    const auto [a, b, c, d] = v;
    double expect = 0.0;
    if (a + d <= b + c) expect = pi / 4.0 * a;
    else if (d < a + b + c) expect = pi / 8.0 * (a + b + c - d);
    EXPECT_NEAR(got, expect, 1e-12);
    EXPECT_EQ(min_identity_holds(v[3], v[1], v[0], v[2]), a + d <= b + c);
  }
}

TEST(SineIntegral, OracleMatchesClosedFormOnRandomQuadruples) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int k = 0; k < 40; ++k) {
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    const auto q = sine_integral_oracle(a, b, c, d, 1e4);
    EXPECT_NEAR(q.value, eight_term_expansion(a, b, c, d), 1e-3);
    EXPECT_GT(q.error_estimate, 0.0);
  }
}

TEST(SineIntegral, RejectsBadArguments) {
  EXPECT_THROW(min_identity(-1, 1, 1, 1), DomainError);
  EXPECT_THROW(sine_integral_oracle(1, 1, 1, 1, 10.0), DomainError);
}

TEST(Xi, QuadraticAllOnes) {
  const auto d = DispersionRelation::power_law(2.0);
  EXPECT_DOUBLE_EQ(xi_weight(d, 1, 1, 1, 1), 1.0 / 16.0);
}

TEST(Xi, VanishesAtZeroFrequencyWhenIotaPositive) {
  const auto d = DispersionRelation::power_law(1.5);
  EXPECT_EQ(xi_weight(d, 1.0, 2.0, 3.0, 0.0), 0.0);
}

TEST(Xi, ProductOfMhoAndMinRadius) {
  const auto d = DispersionRelation::power_law(1.5);
  // r = 1 for w = 1 and r = 4 for w = 8.
  const double expect = d.mho(1.0) * d.mho(4.0) * d.mho(1.0) * d.mho(4.0) * 1.0;
  EXPECT_NEAR(xi_weight(d, 1, 8, 1, 8), expect, 1e-14);
}

TEST(CutoffKernel, HandValues) {
  const auto d = DispersionRelation::power_law(2.0);
  EXPECT_DOUBLE_EQ(cutoff_kernel(KernelWeights(), d, 1, 1, 1), 0.5);
  EXPECT_EQ(cutoff_kernel(KernelWeights(), d, 0.1, 0.1, 1.0), 0.0);
  EXPECT_EQ(cutoff_kernel(KernelWeights(8.0 * pi * pi, 2.0), d, 9.0, 1.0, 1.0), 0.0);
  EXPECT_GT(cutoff_kernel(KernelWeights(8.0 * pi * pi, 2.0), d, 1.0, 1.0, 1.0), 0.0);
}

TEST(CutoffKernel, BoundedByCutoff) {
  const auto d = DispersionRelation::power_law(1.5);
  const KernelWeights kw(1.0, 4.0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int k = 0; k < 2000; ++k) {
    const double k_val = cutoff_kernel(kw, d, u(rng), u(rng), u(rng));
    EXPECT_GE(k_val, 0.0);
    EXPECT_TRUE(std::isfinite(k_val));
  }
}

TEST(KernelWeights, Validation) {
  EXPECT_THROW(KernelWeights(-1.0), DomainError);
  EXPECT_THROW(KernelWeights(1.0, 0.5), DomainError);
  EXPECT_DOUBLE_EQ(KernelWeights().c_q(), 8.0 * pi * pi);
  EXPECT_FALSE(KernelWeights().has_cutoff());
}
