#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wavecascade/config.hpp"
#include "wavecascade/diagnostics.hpp"

namespace wavecascade {

// Exit codes of every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// One line of a verification table.
struct CheckRow {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

void print_checks(std::ostream& out, const std::vector<CheckRow>& rows);

std::vector<CheckRow> kernel_checks(const RunConfig& config);
std::vector<CheckRow> geometry_checks(const RunConfig& config);

// Series CSV: time, mass, energy, band_energy_R<R>, low_mass_d<delta>,
// mass_fraction_below_w<omega>, production_<id>, then optionally g_0..g_{n-1}.
// Numbers use %.17g so identical runs give identical bytes.
void write_series_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records,
                      const std::vector<SpectrumState>* spectra, std::size_t n_nodes,
                      const DiagnosticsPlan& plan, bool header_only = false);
// Reads the diagnostic columns back; g_* columns are ignored. Throws IoError
// on malformed input.
std::vector<DiagnosticsRecord> read_series_csv(std::istream& in);

// Initial spectrum for the configured preset.
SpectrumState make_initial_state(const RunConfig& config, const OmegaGrid& grid);
// Diagnostics plan with empty band radii / deltas filled from the initial
// data (25th percentile of the support, and delta^2 = omega_4).
DiagnosticsPlan make_plan(const RunConfig& config, const OmegaGrid& grid,
                          const SpectrumState& initial);

struct SimulateOptions {
  std::filesystem::path out_dir = "run";
  bool dump_spectrum = false;
};

// Writes config.txt, series.csv and summary.json into out_dir. Returns 1 if
// mass or energy drift exceeds 1e-10.
int cmd_simulate(const RunConfig& config, const SimulateOptions& options, std::ostream& log);
int cmd_verify_kernel(const RunConfig& config, std::ostream& out);
int cmd_verify_geometry(const RunConfig& config, std::ostream& out);
// Cascade report of a series.csv, printed as JSON and, if out_dir is given,
// written to out_dir/report.json.
int cmd_report(const std::filesystem::path& series, const RunConfig& config,
               const std::optional<std::filesystem::path>& out_dir, std::ostream& out);

}  // namespace wavecascade
