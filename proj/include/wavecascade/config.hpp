#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wavecascade/collision_kernel.hpp"
#include "wavecascade/dispersion.hpp"
#include "wavecascade/kernel_table.hpp"
#include "wavecascade/spectral_solver.hpp"

namespace wavecascade {

// Every run setting. Text form is one `key = value` per line, `#` starts a
// comment, lists are comma separated. Unknown keys are rejected.
struct RunConfig {
  // dispersion
  std::string dispersion_kind = "power_law";  // power_law | mixed_power
  double alpha = 2.0;
  double beta = 2.0;  // upper exponent of mixed_power
  // Optional overrides of the growth constants; the relation is then
  // re-validated against them.
  std::optional<double> c_omega_lower, c_omega_upper, c_mho, iota, alpha_prime;

  // grid
  std::size_t n_nodes = 128;
  double omega_max = 1.0;

  // kernel
  double c_q = KernelWeights::kDefaultCq;
  double cutoff = std::numeric_limits<double>::infinity();
  Truncation truncation = Truncation::kClosed;
  std::size_t memory_budget_mb = 2048;
  std::string table_cache;  // empty: no cache
  double oracle_tail_cut = 1e4;
  double oracle_tol = 1e-3;
  std::size_t oracle_samples = 200;

  // initial data
  std::string initial_preset = "gaussian_bump";  // gaussian_bump | ring | file
  double initial_center = 0.5;
  double initial_width = 0.05;
  double initial_amplitude = 1.0;
  double initial_ring_radius = 0.7;
  std::string initial_file;  // two columns: omega, g

  // integrator
  Scheme scheme = Scheme::kRk4;
  double dt0 = 1e-3;
  double dt_max = 0.3;
  double safety = 0.1;
  double t_end = 300.0;
  std::size_t output_every = 10;
  double floor_rel = 1e-8;
  int chunks = 64;
  std::size_t max_steps = 10'000'000;

  // diagnostics; empty band_radii / deltas mean "derive from the initial data"
  std::vector<double> band_radii;
  std::vector<double> deltas;
  std::vector<std::string> test_functions = {"square", "cutoff:0.25"};
  std::vector<double> mass_thresholds = {0.25};
  double transient_fraction = 0.2;

  // geometry experiments
  std::size_t cap_configurations = 400;
  std::size_t cap_points = 2000;
  std::size_t vcone_samples = 2'000'000;
  std::size_t manifold_pairs = 10;
  std::size_t manifold_samples = 20'000;  // directions
  double manifold_eps = 0.01;

  std::uint64_t seed = 1;
  int threads = 0;

  // Effective configuration in the same text form parse_config reads.
  std::string to_text() const;
};

// Throws ConfigError (key, line, reason).
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);
// Sets one key as if it appeared in a file; `line` is only used for messages.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value,
                   int line = 0);
// Cross-field checks (alpha range for the chosen kind, constants, ...).
void validate(const RunConfig& config);

std::vector<std::string> known_config_keys();

// Objects described by a config.
DispersionRelation make_dispersion(const RunConfig& config);
KernelBuildOptions make_build_options(const RunConfig& config);
EvolveOptions make_evolve_options(const RunConfig& config);

}  // namespace wavecascade
