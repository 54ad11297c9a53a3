#pragma once

#include <cstddef>
#include <vector>

#include "wavecascade/collision_rhs.hpp"
#include "wavecascade/diagnostics.hpp"
#include "wavecascade/grid.hpp"
#include "wavecascade/kernel_table.hpp"

namespace wavecascade {

enum class Scheme { kRk4, kEuler };

struct StepOptions {
  Scheme scheme = Scheme::kRk4;
  int max_halvings = 30;
  ParallelOptions parallel;
};

struct StepResult {
  SpectrumState state;
  double dt = 0.0;  // step actually taken
  int halvings = 0;
};

// One explicit step of size dt. If the result has a negative entry the step
// is retried with dt/2, up to max_halvings times; after that StiffnessError
// carries the starting state. Throws DomainError for dt <= 0.
StepResult step(const KernelTable& table, const SpectrumState& state, double dt,
                const StepOptions& options = {});

struct EvolveOptions {
  double dt0 = 1e-3;     // first trial step
  double dt_max = 1e30;  // hard cap
  // dt <= safety * min over draining nodes of max(g_i, floor) / |rhs_i|.
  double safety = 0.1;
  // floor = floor_rel * max_i g_i
  double floor_rel = 1e-8;
  // Record diagnostics every this many accepted steps (and always at t_end).
  std::size_t output_every = 10;
  std::size_t max_steps = 10'000'000;
  // Keep the full spectrum for every record.
  bool keep_spectra = false;
  StepOptions step;
};

struct EvolveResult {
  std::vector<DiagnosticsRecord> records;
  std::vector<SpectrumState> spectra;  // parallel to records when keep_spectra
  SpectrumState final_state;
  std::size_t accepted_steps = 0;
  std::size_t halvings = 0;
  bool reached_end = true;  // false if max_steps ran out first
};

// Integrates from state0.time to t_end. t_end equal to the start time yields
// the initial record only. Throws DomainError if t_end is earlier than the
// start, ContractError on a grid mismatch, and propagates StiffnessError.
EvolveResult evolve(const KernelTable& table, const SpectrumState& state0, double t_end,
                    const DiagnosticsPlan& plan, const EvolveOptions& options = {});

// Step-size heuristic used by evolve, exposed for tests.
double suggest_dt(const SpectrumState& state, const std::vector<double>& rate,
                  const EvolveOptions& options);

}  // namespace wavecascade
