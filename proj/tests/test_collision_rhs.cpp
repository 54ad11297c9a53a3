#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "support.hpp"
#include "wavecascade/collision_rhs.hpp"
#include "wavecascade/diagnostics.hpp"
#include "wavecascade/errors.hpp"

using namespace wavecascade;

namespace {

// Undeduplicated evaluation with the kernel written out by hand: every ordered
// (i, j, l) with all resonant partners on the grid, radii from invert().
std::vector<double> rhs_oracle(const KernelWeights& kw, const OmegaGrid& grid,
                               const std::vector<double>& g) {
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t l = 0; l <= i + j && l < n; ++l) {
        std::array<std::size_t, 3> s = {i, j, l};
        std::sort(s.begin(), s.end());
        if (s[2] + s[1] - s[0] >= n) continue;
        const std::size_t m = i + j - l;
        const auto& d = grid.dispersion();
        const double r = d.invert(grid.omega(i)), r1 = d.invert(grid.omega(j));
        const double r2 = d.invert(grid.omega(l)), r3 = d.invert(grid.omega(m));
        const double k = (r == 0 || r1 == 0 || r2 == 0 || r3 == 0)
                             ? 0.0
                             : d.mho(r3) * std::min({r, r1, r2, r3}) / (r * r1 * r2);
        const double w = kw.c_q() * k;
        const double rho = w * g[i] * g[j] * g[l] * h * h;
        out[i] -= rho;
        out[j] -= rho;
        out[l] += rho;
        out[m] += rho;
      }
    }
  }
  return out;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(Rhs, ZeroStateGivesZero) {
  const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(1.5), 16, 1.0);
  const auto table = KernelTable::build(KernelWeights(), grid);
  SpectrumState s;
  s.g.assign(16, 0.0);
  for (double r : rhs(table, s)) EXPECT_EQ(r, 0.0);
}

TEST(Rhs, MassAtOriginOnlyGivesZero) {
  const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(2.0), 16, 1.0);
  const auto table = KernelTable::build(KernelWeights(), grid);
  SpectrumState s;
  s.g.assign(16, 0.0);
  s.g[0] = 5.0;
  for (double r : rhs(table, s)) EXPECT_EQ(r, 0.0);
}

TEST(Rhs, GridMismatchIsContractError) {
  const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(2.0), 8, 1.0);
  const auto table = KernelTable::build(KernelWeights(), grid);
  SpectrumState s;
  s.g.assign(9, 1.0);
  EXPECT_THROW(rhs(table, s), ContractError);
}

TEST(Rhs, MatchesUndeduplicatedOracle) {
  for (double a : {1.5, 2.0}) {
    const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(a), 16, 2.0);
    const KernelWeights kw;
    const auto table = KernelTable::build(kw, grid);
    const auto s = wctest::random_state(16, 41);
    const auto got = rhs(table, s);
    const auto expect = rhs_oracle(kw, grid, s.g);
    const double scale = deposit_magnitude(table, s.g);
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expect[i], 1e-13 * scale);
  }
}

TEST(Rhs, ConservesMassAndEnergyOnSixteenNodes) {
  for (double a : {1.5, 2.0}) {
    const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(a), 16, 1.0);
    const auto table = KernelTable::build(KernelWeights(), grid);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto s = wctest::random_state(16, seed);
      const auto r = rhs(table, s);
      const double h = grid.spacing();
      double m = 0.0, e = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        m += r[i] * h;
        e += r[i] * grid.omega(i) * h;
      }
      const double scale = deposit_magnitude(table, s.g) * h;
      EXPECT_LE(std::abs(m), 1e-12 * scale);
      EXPECT_LE(std::abs(e), 1e-12 * scale * grid.omega_max());
    }
  }
}

TEST(Rhs, WeakFormOfConstantAndLinearIsZero) {
  const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(1.5), 32, 3.0);
  const auto table = KernelTable::build(KernelWeights(), grid);
  const auto s = wctest::random_state(32, 9);
  for (const auto& tf : {test_functions::constant(1.0), test_functions::linear()}) {
    const double p = weak_form_production(table, s, tf);
    EXPECT_LE(std::abs(p), 1e-13 * production_scale(table, s, tf)) << tf.id;
    // Pairing the rhs with phi gives the same number.
    const auto r = rhs(table, s);
    double paired = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) paired += r[i] * tf.phi(grid.omega(i)) * grid.spacing();
    EXPECT_NEAR(paired, p, 1e-12 * production_scale(table, s, tf));
  }
}

TEST(Rhs, ParallelMatchesReference) {
  const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(1.5), 48, 1.0);
  const auto table = KernelTable::build(KernelWeights(), grid);
  const auto s = wctest::random_state(48, 5);
  std::vector<double> ref(48), par(48);
  collision_rhs_reference(table, s.g, ref);
  collision_rhs_parallel(table, s.g, par);
  const double scale = deposit_magnitude(table, s.g);
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(par[i], ref[i], 1e-14 * scale);
}

TEST(Rhs, ParallelIsBitwiseIndependentOfThreadCount) {
  const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(2.0), 48, 1.0);
  const auto table = KernelTable::build(KernelWeights(), grid);
  const auto s = wctest::random_state(48, 6);
  std::vector<double> base(48);
  collision_rhs_parallel(table, s.g, base, {64, 1});
  for (int threads : {2, 3, 4, 8}) {
    std::vector<double> out(48);
    collision_rhs_parallel(table, s.g, out, {64, threads});
    for (std::size_t i = 0; i < out.size(); ++i) ASSERT_EQ(out[i], base[i]) << threads;
  }
}

TEST(Rhs, SingleChunkEqualsReferenceExactly) {
  const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(2.0), 32, 1.0);
  const auto table = KernelTable::build(KernelWeights(), grid);
  const auto s = wctest::random_state(32, 8);
  std::vector<double> ref(32), par(32);
  collision_rhs_reference(table, s.g, ref);
  collision_rhs_parallel(table, s.g, par, {1, 4});
  EXPECT_EQ(ref, par);
}

TEST(Rhs, DepositMagnitudeBoundsRhs) {
  const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(2.0), 24, 1.0);
  const auto table = KernelTable::build(KernelWeights(), grid);
  const auto s = wctest::random_state(24, 2);
  EXPECT_LE(max_abs(rhs(table, s)), deposit_magnitude(table, s.g));
}
