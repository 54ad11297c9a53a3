#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wavecascade/grid.hpp"
#include "wavecascade/kernel_table.hpp"

namespace wavecascade {

// Test function phi(omega) for the weak form, identified by a short id such
// as "cutoff:0.5" so it can be named in configs and CSV headers.
struct TestFunction {
  std::string id;
  std::function<double(double)> phi;
};

namespace test_functions {
TestFunction constant(double c);
TestFunction linear();                       // omega
TestFunction square();                       // omega^2
TestFunction cutoff_below(double c);         // (c - omega)_+
TestFunction smooth_cutoff_below(double c, double eps);  // eps log(1 + e^{(c - omega)/eps})
TestFunction ramp_above(double c);           // (omega - c)_+
TestFunction inverse_cutoff(double theta);   // (1 - theta omega)_+
// Parses "constant:c", "linear", "square", "cutoff:c", "smooth_cutoff:c:eps",
// "ramp:c", "inverse_cutoff:theta". Throws ContractError on anything else.
TestFunction parse(const std::string& id);
}  // namespace test_functions

// sum g_i h
double mass(const OmegaGrid& grid, const SpectrumState& state);
// sum g_i omega_i h
double energy(const OmegaGrid& grid, const SpectrumState& state);
// sum over r_i <= R of g_i omega_i h
double band_energy(const OmegaGrid& grid, const SpectrumState& state, double radius);
// sum over omega_i <= delta^2 of g_i h
double low_mass(const OmegaGrid& grid, const SpectrumState& state, double delta);
// Fraction of the mass sitting at omega_i <= threshold.
double mass_fraction_below(const OmegaGrid& grid, const SpectrumState& state, double threshold);

// Radius at the given percentile (0..1) of the nodes where g exceeds
// rel_threshold * max g. DomainError if no node qualifies.
double support_percentile_radius(const OmegaGrid& grid, const SpectrumState& state,
                                 double percentile = 0.25, double rel_threshold = 1e-3);

// Largest violation of convexity of phi on the grid nodes, as
// max(0, -(phi_{i-1} - 2 phi_i + phi_{i+1})). Zero for convex phi.
double convexity_defect(const OmegaGrid& grid, const TestFunction& tf);

// <Q, phi> = sum_entries W g_i g_j g_l h^3 [-phi_i - phi_j + phi_l + phi_m].
// Throws ContractError if phi is not convex on the grid (to 1e-12 of its
// scale) or not finite, so a negative value always points at the solver.
double convex_production(const KernelTable& table, const SpectrumState& state,
                         const TestFunction& tf);
// Same bracket without the convexity precondition.
double weak_form_production(const KernelTable& table, const SpectrumState& state,
                            const TestFunction& tf);
// sum_entries |W g_i g_j g_l| h^3 (|phi_i| + |phi_j| + |phi_l| + |phi_m|): the
// size of the individual terms, against which rounding in the production is
// judged.
double production_scale(const KernelTable& table, const SpectrumState& state,
                        const TestFunction& tf);

struct DiagnosticsPlan {
  std::vector<double> band_radii;
  std::vector<double> deltas;
  std::vector<TestFunction> test_functions;
  std::vector<double> concentration_thresholds;  // omega thresholds
};

struct DiagnosticsRecord {
  double time = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  std::vector<std::pair<double, double>> band_energy;           // (R, value)
  std::vector<std::pair<double, double>> low_mass;              // (delta, value)
  std::vector<std::pair<std::string, double>> convex_production;  // (id, value)
  std::vector<std::pair<double, double>> mass_fraction_below;   // (omega, fraction)
};

DiagnosticsRecord make_record(const KernelTable& table, const SpectrumState& state,
                              const DiagnosticsPlan& plan);

// Kendall tau-b rank correlation of the values against their index. 0 when
// there are fewer than two distinct values.
double kendall_tau(std::span<const double> values);

enum class Trend { kDecreasing, kFlat, kIncreasing };
const char* to_string(Trend t);

struct TrendSummary {
  std::string quantity;  // e.g. "band_energy"
  double parameter = 0.0;  // R, delta or omega threshold
  double kendall_tau = 0.0;
  double first = 0.0;      // first value after the transient
  double last = 0.0;
  double relative_change = 0.0;  // (last - first) / |first|, 0 if first == 0
  Trend trend = Trend::kFlat;
};

struct CascadeReportOptions {
  double transient_fraction = 0.2;
  // |tau| below this, or |relative_change| below flat_change, reads as flat.
  double tau_threshold = 0.5;
  double flat_change = 1e-9;
};

struct CascadeReport {
  std::size_t records = 0;
  std::size_t discarded = 0;
  double t_first = 0.0, t_last = 0.0;
  double mass_drift = 0.0;    // max |M(t) - M(0)| / M(0)
  double energy_drift = 0.0;  // max |E(t) - E(0)| / E(0)
  std::vector<TrendSummary> band_energy;
  std::vector<TrendSummary> low_mass;
  std::vector<TrendSummary> mass_fraction_below;
  std::vector<TrendSummary> convex_production;

  nlohmann::json to_json() const;
};

// Trend statistics over a time series. Throws ContractError if empty.
CascadeReport cascade_report(std::span<const DiagnosticsRecord> series,
                             const CascadeReportOptions& options = {});

}  // namespace wavecascade
