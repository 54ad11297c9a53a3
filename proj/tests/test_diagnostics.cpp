#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "support.hpp"
#include "wavecascade/diagnostics.hpp"
#include "wavecascade/errors.hpp"

using namespace wavecascade;

TEST(Moments, ZeroState) {
  const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(2.0), 8, 1.0);
  SpectrumState s;
  s.g.assign(8, 0.0);
  EXPECT_EQ(mass(grid, s), 0.0);
  EXPECT_EQ(energy(grid, s), 0.0);
  EXPECT_EQ(mass_fraction_below(grid, s, 0.5), 0.0);
}

TEST(Moments, SingleNode) {
  const OmegaGrid grid(DispersionRelation::power_law(2.0), 8, 0.5);
  SpectrumState s;
  s.g.assign(8, 0.0);
  s.g[5] = 2.0;
  EXPECT_DOUBLE_EQ(mass(grid, s), 1.0);
  EXPECT_DOUBLE_EQ(energy(grid, s), 2.5);
}

TEST(Moments, GaussianBumpMatchesClosedForm) {
  // int exp(-(w - c)^2 / (2 s^2)) dw = s sqrt(2 pi), first moment c times that.
  const double c = 2.0, w = 0.2;
  const double m_exact = w * std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t n : {41, 81, 161}) {
    const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(1.5), n, 4.0);
    const auto s = gaussian_bump(grid, c, w, 1.0);
    const double err = std::abs(mass(grid, s) - m_exact);
    EXPECT_LT(err, 1e-6);
    EXPECT_NEAR(energy(grid, s), c * m_exact, 1e-6);
  }
}

TEST(BandEnergy, Limits) {
  const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(2.0), 32, 9.0);
  const auto s = wctest::random_state(32, 1);
  EXPECT_EQ(band_energy(grid, s, 0.5 * grid.radius(1)), 0.0);
  EXPECT_DOUBLE_EQ(band_energy(grid, s, std::numeric_limits<double>::infinity()), energy(grid, s));
}

TEST(BandEnergy, BumpOrdering) {
  const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(2.0), 101, 25.0);
  // Bump at r = 2, i.e. omega = 4.
  const auto s = gaussian_bump(grid, 4.0, 0.5, 1.0);
  EXPECT_LT(band_energy(grid, s, 1.0), band_energy(grid, s, 4.0));
}

TEST(LowMass, CountsNodesUpToDeltaSquared) {
  const OmegaGrid grid(DispersionRelation::power_law(2.0), 10, 0.25);
  SpectrumState s;
  s.g.assign(10, 1.0);
  EXPECT_DOUBLE_EQ(low_mass(grid, s, 1.0), 5 * 0.25);  // omega 0, .25, .5, .75, 1
  EXPECT_DOUBLE_EQ(mass_fraction_below(grid, s, 1.0), 0.5);
}

TEST(SupportPercentile, PicksQuarterOfSupport) {
  const OmegaGrid grid(DispersionRelation::power_law(2.0), 20, 1.0);
  SpectrumState s;
  s.g.assign(20, 0.0);
  for (std::size_t i = 4; i <= 12; ++i) s.g[i] = 1.0;  // 9 nodes, quarter at index 2
  EXPECT_DOUBLE_EQ(support_percentile_radius(grid, s), grid.radius(6));
  s.g.assign(20, 0.0);
  EXPECT_THROW(support_percentile_radius(grid, s), DomainError);
}

TEST(TestFunctions, ParseRoundTrip) {
  for (const char* id : {"linear", "square", "cutoff:0.3", "smooth_cutoff:0.3:0.01", "ramp:0.5",
                         "inverse_cutoff:2", "constant:3"}) {
    EXPECT_EQ(test_functions::parse(id).id, id);
  }
  EXPECT_DOUBLE_EQ(test_functions::parse("cutoff:0.3").phi(0.1), 0.2);
  EXPECT_DOUBLE_EQ(test_functions::parse("ramp:0.5").phi(0.7), 0.7 - 0.5);
  EXPECT_DOUBLE_EQ(test_functions::parse("inverse_cutoff:2").phi(0.25), 0.5);
  EXPECT_THROW(test_functions::parse("cubic"), ContractError);
  EXPECT_THROW(test_functions::parse("cutoff:x"), ContractError);
  EXPECT_THROW(test_functions::parse("smooth_cutoff:0.3:-1"), ContractError);
}

TEST(TestFunctions, SmoothCutoffApproachesKink) {
  const auto tf = test_functions::smooth_cutoff_below(0.5, 1e-3);
  EXPECT_NEAR(tf.phi(0.2), 0.3, 1e-9);
  EXPECT_NEAR(tf.phi(0.8), 0.0, 1e-9);
  EXPECT_GT(tf.phi(0.5), 0.0);
}

TEST(Production, ConstantAndLinearVanish) {
  const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(2.0), 32, 1.0);
  const auto table = KernelTable::build(KernelWeights(), grid);
  const auto s = wctest::random_state(32, 4);
  for (const auto& tf : {test_functions::constant(2.0), test_functions::linear()}) {
    EXPECT_LE(std::abs(convex_production(table, s, tf)), 1e-13 * production_scale(table, s, tf));
  }
}

TEST(Production, NonConvexIsRejected) {
  const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(2.0), 16, 1.0);
  const auto table = KernelTable::build(KernelWeights(), grid);
  const auto s = wctest::random_state(16, 4);
  const TestFunction concave{"sqrt", [](double w) { return std::sqrt(w); }};
  EXPECT_GT(convexity_defect(grid, concave), 0.0);
  EXPECT_THROW(convex_production(table, s, concave), ContractError);
  const TestFunction bad{"log", [](double w) { return std::log(w); }};
  EXPECT_THROW(convex_production(table, s, bad), ContractError);
}

TEST(Production, ConvexFunctionsAreNonnegative) {
  for (double a : {1.5, 2.0}) {
    const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(a), 40, 1.0);
    const auto table = KernelTable::build(KernelWeights(), grid);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto s = wctest::random_state(40, 100 + seed);
      for (const auto& tf :
           {test_functions::square(), test_functions::cutoff_below(0.3),
            test_functions::smooth_cutoff_below(0.3, 0.02), test_functions::ramp_above(0.6),
            test_functions::inverse_cutoff(1.5)}) {
        EXPECT_GE(convex_production(table, s, tf), -1e-10 * production_scale(table, s, tf))
            << tf.id << " alpha " << a << " seed " << seed;
      }
    }
  }
}

TEST(Kendall, Basics) {
  EXPECT_DOUBLE_EQ(kendall_tau(std::vector<double>{1, 2, 3, 4}), 1.0);
  EXPECT_DOUBLE_EQ(kendall_tau(std::vector<double>{4, 3, 2, 1}), -1.0);
  EXPECT_DOUBLE_EQ(kendall_tau(std::vector<double>{1, 1, 1}), 0.0);
  EXPECT_DOUBLE_EQ(kendall_tau(std::vector<double>{5}), 0.0);
  // Pairs: (1,3)+ (1,2)+ (3,2)-: C - D = 1 over 3.
  EXPECT_NEAR(kendall_tau(std::vector<double>{1, 3, 2}), 1.0 / 3.0, 1e-15);
}

namespace {

std::vector<DiagnosticsRecord> series(std::size_t n, double band_slope, double low_slope) {
  std::vector<DiagnosticsRecord> out;
  for (std::size_t k = 0; k < n; ++k) {
    DiagnosticsRecord r;
    r.time = static_cast<double>(k);
    r.mass = 1.0;
    r.energy = 2.0;
    r.band_energy = {{0.5, 1.0 + band_slope * static_cast<double>(k)}};
    r.low_mass = {{0.1, 0.2 + low_slope * static_cast<double>(k)}};
    r.convex_production = {{"square", 0.0}};
    r.mass_fraction_below = {{0.25, 0.5}};
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST(CascadeReport, ConstantSeriesIsFlat) {
  const auto s = series(50, 0.0, 0.0);
  const auto rep = cascade_report(s);
  EXPECT_EQ(rep.discarded, 10u);
  EXPECT_EQ(rep.band_energy.at(0).trend, Trend::kFlat);
  EXPECT_EQ(rep.low_mass.at(0).trend, Trend::kFlat);
  EXPECT_EQ(rep.mass_fraction_below.at(0).trend, Trend::kFlat);
  EXPECT_EQ(rep.mass_drift, 0.0);
}

TEST(CascadeReport, DetectsTrends) {
  const auto s = series(50, -0.01, 0.001);
  const auto rep = cascade_report(s);
  EXPECT_EQ(rep.band_energy.at(0).trend, Trend::kDecreasing);
  EXPECT_DOUBLE_EQ(rep.band_energy.at(0).kendall_tau, -1.0);
  EXPECT_EQ(rep.low_mass.at(0).trend, Trend::kIncreasing);
  const auto j = rep.to_json();
  EXPECT_EQ(j["band_energy"][0]["trend"], "decreasing");
  EXPECT_EQ(j["low_mass"][0]["trend"], "increasing");
}

TEST(CascadeReport, EmptySeriesIsContractError) {
  EXPECT_THROW(cascade_report(std::vector<DiagnosticsRecord>{}), ContractError);
  const auto s = series(5, 0.0, 0.0);
  CascadeReportOptions bad;
  bad.transient_fraction = 1.0;
  EXPECT_THROW(cascade_report(s, bad), ContractError);
}
