// Acceptance run: one PASS/FAIL line per criterion, then a summary.
//
// Criterion 1 asks (pi/4) min{r} to match the sine integral on arbitrary
// quadruples, which is false for about half of them (the reduction needs
// max + min <= sum of the middle two). It is reported as FAIL and listed as
// known-unattainable; the exit status counts every other failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wavecascade/collision_kernel.hpp"
#include "wavecascade/collision_rhs.hpp"
#include "wavecascade/commands.hpp"
#include "wavecascade/config.hpp"
#include "wavecascade/diagnostics.hpp"
#include "wavecascade/spectral_solver.hpp"

using namespace wavecascade;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const std::set<int> kKnownUnattainable = {1};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SpectrumState random_state(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SpectrumState s;
  s.g.resize(n);
  for (auto& g : s.g) g = u(rng) < 0.2 ? 0.0 : u(rng);
  return s;
}

Outcome min_identity_oracle() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> radius(0.1, 5.0);
  int within = 0, closed_ok = 0, reducible = 0, reducible_ok = 0;
  double worst_closed = 0.0;
  for (int s = 0; s < 200; ++s) {
    const double a = radius(rng), b = radius(rng), c = radius(rng), d = radius(rng);
    const double q = sine_integral_oracle(a, b, c, d, 1e4).value;
    const double min_form = pi / 4.0 * std::min({a, b, c, d});
    const bool ok = std::abs(q - min_form) <= 1e-3;
    within += ok;
    const double err = std::abs(q - eight_term_expansion(a, b, c, d));
    worst_closed = std::max(worst_closed, err);
    closed_ok += err <= 1e-3;
    if (min_identity_holds(a, b, c, d)) {
      ++reducible;
      reducible_ok += ok;
    }
  }
  int eight_ok = 0;
  for (int s = 0; s < 10'000; ++s) {
    const double a = radius(rng), b = radius(rng), c = radius(rng), d = radius(rng);
    eight_ok += std::abs(eight_term_expansion(a, b, c, d) - pi / 4.0 * std::min({a, b, c, d})) <= 1e-12;
  }
  Outcome o;
  o.pass = within == 200 && eight_ok == 10'000;
  o.detail = fmt(
      "|oracle - (pi/4) min| <= 1e-3 on %d/200, eight-term == (pi/4) min on %d/10000 "
      "[oracle vs eight-term closed form: %d/200, max err %.2e; (pi/4) min on the %d quadruples "
      "with max+min <= middle sum: %d/%d]",
      within, eight_ok, closed_ok, worst_closed, reducible, reducible_ok, reducible);
  return o;
}

Outcome exact_conservation() {
  std::mt19937_64 rng(2);
  double worst_mass = 0.0, worst_energy = 0.0;
  for (double alpha : {1.5, 2.0}) {
    const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(alpha), 64, 1.0);
    const auto table = KernelTable::build(KernelWeights(), grid);
    const double h = grid.spacing();
    for (int k = 0; k < 50; ++k) {
      const auto s = random_state(64, rng);
      const auto r = rhs(table, s);
      double m = 0.0, e = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        m += r[i] * h;
        e += r[i] * grid.omega(i) * h;
      }
      double dep_mass = 0.0, dep_energy = 0.0;
      for (const auto& en : table.entries()) {
        const double rho = std::abs(en.weight * s.g[en.i] * s.g[en.j] * s.g[en.l]) * h * h;
        dep_mass += 4.0 * rho;
        dep_energy += rho * (grid.omega(en.i) + grid.omega(en.j) + grid.omega(en.l) + grid.omega(en.m));
      }
      worst_mass = std::max(worst_mass, std::abs(m) / (dep_mass * h));
      worst_energy = std::max(worst_energy, std::abs(e) / (dep_energy * h));
    }
  }
  return {worst_mass <= 1e-12 && worst_energy <= 1e-12,
          fmt("100 states (50 per alpha in {1.5, 2}), 64 nodes: max relative mass residual %.2e, "
              "energy residual %.2e (limit 1e-12)",
              worst_mass, worst_energy)};
}

Outcome convex_monotonicity() {
  std::vector<TestFunction> phis;
  for (double c : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    phis.push_back(test_functions::cutoff_below(c));
    phis.push_back(test_functions::smooth_cutoff_below(c, 0.02));
  }
  phis.push_back(test_functions::square());
  for (double c : {0.25, 0.5, 0.75}) phis.push_back(test_functions::ramp_above(c));

  std::mt19937_64 rng(3);
  double worst = std::numeric_limits<double>::infinity();
  std::string worst_id;
  int evaluations = 0;
  for (double alpha : {1.5, 2.0}) {
    const auto grid = OmegaGrid::from_max(DispersionRelation::power_law(alpha), 64, 1.0);
    const auto table = KernelTable::build(KernelWeights(), grid);
    for (int k = 0; k < 20; ++k) {
      const auto s = random_state(64, rng);
      for (const auto& tf : phis) {
        const double rel = convex_production(table, s, tf) / production_scale(table, s, tf);
        ++evaluations;
        if (rel < worst) {
          worst = rel;
          worst_id = tf.id;
        }
      }
    }
  }
  return {worst >= -1e-10,
          fmt("%d productions (%zu test functions, 20 states, 2 dispersions): min production/scale "
              "%.2e%s%s (limit -1e-10)",
              evaluations, phis.size(), worst, worst_id.empty() ? "" : " at ", worst_id.c_str())};
}

Outcome cascade() {
  RunConfig cfg;  // alpha = 2, 128 nodes, bump at 0.5, t_end = 300
  cfg.output_every = 1;
  const auto d = make_dispersion(cfg);
  const auto grid = OmegaGrid::from_max(d, cfg.n_nodes, cfg.omega_max);
  const auto table = KernelTable::build(KernelWeights(cfg.c_q, cfg.cutoff), grid, make_build_options(cfg));
  const auto initial = make_initial_state(cfg, grid);
  const auto plan = make_plan(cfg, grid, initial);
  const auto result = evolve(table, initial, cfg.t_end, plan, make_evolve_options(cfg));
  const auto rep = cascade_report(result.records, {cfg.transient_fraction});
  const auto& band = rep.band_energy.at(0);
  const auto& low = rep.low_mass.at(0);
  const bool pass = band.kendall_tau < -0.8 && band.relative_change <= -0.10 &&
                    low.kendall_tau >= 0.0 && low.relative_change >= 0.0 &&
                    rep.mass_drift <= 1e-10 && rep.energy_drift <= 1e-10;
  return {pass, fmt("%zu accepted steps, R = %.4f: band_energy tau %.3f change %+.1f%%; delta = %.4f: "
                    "low_mass tau %.3f change %+.2f%%; drift mass %.1e energy %.1e",
                    result.accepted_steps, band.parameter, band.kendall_tau,
                    100.0 * band.relative_change, low.parameter, low.kendall_tau,
                    100.0 * low.relative_change, rep.mass_drift, rep.energy_drift)};
}

Outcome geometry_group(const std::vector<CheckRow>& rows, const std::vector<std::string>& prefixes) {
  int total = 0, ok = 0;
  std::string failed;
  for (const auto& r : rows) {
    const bool match = std::any_of(prefixes.begin(), prefixes.end(),
                                   [&](const std::string& p) { return r.name.starts_with(p); });
    if (!match) continue;
    ++total;
    ok += r.pass;
    if (!r.pass) failed += "; failed: " + r.name;
  }
  return {total > 0 && ok == total, fmt("%d/%d checks%s", ok, total, failed.c_str())};
}

Outcome refinement() {
  std::string detail;
  bool pass = true;
  for (double alpha : {2.0, 1.5}) {
    const auto d = DispersionRelation::power_law(alpha);
    const std::size_t n0 = 33;
    std::vector<std::vector<double>> coarse;
    for (int level = 0; level < 3; ++level) {
      const std::size_t stride = std::size_t{1} << level;
      const auto grid = OmegaGrid::from_max(d, (n0 - 1) * stride + 1, 4.0);
      const auto table = KernelTable::build(KernelWeights(), grid);
      SpectrumState s;
      for (std::size_t i = 0; i < grid.size(); ++i) s.g.push_back(std::exp(-grid.omega(i)));
      const auto r = rhs(table, s);
      std::vector<double> c(n0);
      for (std::size_t i = 0; i < n0; ++i) c[i] = r[i * stride];
      coarse.push_back(std::move(c));
    }
    double diff[2] = {0.0, 0.0};
    for (int k = 0; k < 2; ++k) {
      for (std::size_t i = 0; i < n0; ++i) diff[k] += std::abs(coarse[k][i] - coarse[k + 1][i]);
    }
    const double ratio = diff[0] / diff[1];
    pass = pass && ratio >= 1.5 && ratio <= 2.5;
    detail += fmt("%salpha=%.1f: n 33/65/129, L1 differences %.3e, %.3e, ratio %.3f", detail.empty() ? "" : "; ",
                  alpha, diff[0], diff[1], ratio);
  }
  return {pass, detail + " (window [1.5, 2.5])"};
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  int unexpected_failures = 0;
  std::vector<int> known_failures;

  const auto report = [&](int id, const char* title, double limit_s, const std::function<Outcome()>& run) {
    const auto t0 = clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    if (limit_s > 0.0 && secs > limit_s) {
      o.pass = false;
      o.detail += fmt(" [runtime %.1f s over the %.0f s limit]", secs, limit_s);
    }
    std::printf("criterion %d: %s  %s (%.1f s): %s\n", id, o.pass ? "PASS" : "FAIL", title, secs,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) {
      if (kKnownUnattainable.contains(id)) known_failures.push_back(id);
      else ++unexpected_failures;
    }
  };

  report(1, "min-identity oracle", 60.0, min_identity_oracle);
  report(2, "exact discrete conservation", 30.0, exact_conservation);
  report(3, "convex test-function monotonicity", 0.0, convex_monotonicity);
  report(4, "cascade at desk scale", 300.0, cascade);

  std::vector<CheckRow> geometry;
  const auto t0 = clock::now();
  try {
    geometry = geometry_checks(RunConfig{});
  } catch (const std::exception& e) {
    std::printf("geometry suite threw: %s\n", e.what());
  }
  const double geo_secs = std::chrono::duration<double>(clock::now() - t0).count();
  std::printf("(geometry suite for criteria 5-8 ran in %.1f s)\n", geo_secs);
  report(5, "covering statistics", 0.0,
         [&] { return geometry_group(geometry, {"cap coverage", "least N", "vcone"}); });
  report(6, "expanded-radius predicate", 0.0, [&] { return geometry_group(geometry, {"expanded radius"}); });
  report(7, "spreading root", 0.0, [&] { return geometry_group(geometry, {"spreading root"}); });
  report(8, "manifold quadrature oracles", 0.0, [&] { return geometry_group(geometry, {"manifold"}); });
  report(9, "refinement consistency", 0.0, refinement);

  std::printf("summary: %d unexpected failure(s)", unexpected_failures);
  if (!known_failures.empty()) {
    std::printf("; known-unattainable and failing:");
    for (int id : known_failures) std::printf(" %d", id);
  }
  std::printf("\n");
  return unexpected_failures == 0 ? 0 : 1;
}
