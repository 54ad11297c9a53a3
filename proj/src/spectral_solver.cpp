#include "wavecascade/spectral_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wavecascade/errors.hpp"

namespace wavecascade {

namespace {

std::vector<double> rate(const KernelTable& table, const std::vector<double>& g,
                         const ParallelOptions& par) {
  std::vector<double> out(g.size());
  collision_rhs_parallel(table, g, out, par);
  return out;
}

// y = g + a * k
std::vector<double> axpy(const std::vector<double>& g, double a, const std::vector<double>& k) {
  std::vector<double> y(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) y[p] = g[p] + a * k[p];
  return y;
}

std::vector<double> advance(const KernelTable& table, const std::vector<double>& g,
                            const std::vector<double>& k1, double dt, const StepOptions& opt) {
  if (opt.scheme == Scheme::kEuler) return axpy(g, dt, k1);
  const auto k2 = rate(table, axpy(g, 0.5 * dt, k1), opt.parallel);
  const auto k3 = rate(table, axpy(g, 0.5 * dt, k2), opt.parallel);
  const auto k4 = rate(table, axpy(g, dt, k3), opt.parallel);
  std::vector<double> y(g.size());
  const double c = dt / 6.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    y[p] = g[p] + c * ((k1[p] + k4[p]) + 2.0 * (k2[p] + k3[p]));
  }
  return y;
}

StepResult step_with_rate(const KernelTable& table, const SpectrumState& state,
                          const std::vector<double>& k1, double dt, const StepOptions& opt) {
  for (int halvings = 0; halvings <= opt.max_halvings; ++halvings) {
    auto y = advance(table, state.g, k1, dt, opt);
    // !(v >= 0) also rejects NaN from an overflowing stage.
    if (std::all_of(y.begin(), y.end(), [](double v) { return v >= 0.0 && std::isfinite(v); })) {
      return {SpectrumState{std::move(y), state.time + dt}, dt, halvings};
    }
    dt *= 0.5;
  }
  std::ostringstream msg;
  msg << "step at t = " << state.time << " still produced negative or non-finite values after "
      << opt.max_halvings << " halvings (last dt " << 2.0 * dt << ")";
  throw StiffnessError(msg.str(), state.g, state.time);
}

void check_state(const KernelTable& table, const SpectrumState& state) {
  if (state.g.size() != table.grid().size()) {
    throw ContractError("state has " + std::to_string(state.g.size()) +
                        " nodes but the kernel table grid has " +
                        std::to_string(table.grid().size()));
  }
}

}  // namespace

StepResult step(const KernelTable& table, const SpectrumState& state, double dt,
                const StepOptions& options) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("step: dt must be positive and finite");
  check_state(table, state);
  const auto k1 = rate(table, state.g, options.parallel);
  return step_with_rate(table, state, k1, dt, options);
}

double suggest_dt(const SpectrumState& state, const std::vector<double>& rate,
                  const EvolveOptions& options) {
  double gmax = 0.0;
  for (double g : state.g) gmax = std::max(gmax, g);
  const double floor = options.floor_rel * gmax;
  double dt = options.dt_max;
  // Only draining nodes can go negative; every loss term at node p carries g_p,
  // so g_p / |rhs_p| stays bounded by the inverse loss rate.
  for (std::size_t p = 0; p < rate.size(); ++p) {
    if (rate[p] < 0.0) dt = std::min(dt, options.safety * std::max(state.g[p], floor) / -rate[p]);
  }
  return dt;
}

EvolveResult evolve(const KernelTable& table, const SpectrumState& state0, double t_end,
                    const DiagnosticsPlan& plan, const EvolveOptions& options) {
  check_state(table, state0);
  if (!std::isfinite(t_end) || t_end < state0.time) {
    throw DomainError("evolve: t_end must be finite and not before the initial time");
  }
  if (!(options.dt0 > 0.0) || !(options.safety > 0.0) || !(options.dt_max > 0.0)) {
    throw DomainError("evolve: dt0, dt_max and safety must be positive");
  }

  EvolveResult out;
  SpectrumState state = state0;
  const auto record = [&](const SpectrumState& s) {
    out.records.push_back(make_record(table, s, plan));
    if (options.keep_spectra) out.spectra.push_back(s);
  };
  record(state);

  double trial = std::min(options.dt0, options.dt_max);
  std::size_t since_output = 0;
  while (state.time < t_end) {
    if (out.accepted_steps >= options.max_steps) {
      out.reached_end = false;
      break;
    }
    const auto k1 = rate(table, state.g, options.step.parallel);
    double dt = std::min(trial, suggest_dt(state, k1, options));
    const double remaining = t_end - state.time;
    const bool last = dt >= remaining;
    if (last) dt = remaining;

    StepResult r = step_with_rate(table, state, k1, dt, options.step);
    out.halvings += static_cast<std::size_t>(r.halvings);
    if (last && r.halvings == 0) r.state.time = t_end;  // no rounding drift in the final time
    state = std::move(r.state);
    ++out.accepted_steps;
    // Grow gently after a clean step; the rate bound above does the real limiting.
    trial = r.halvings == 0 ? std::min(2.0 * std::max(trial, r.dt), options.dt_max) : r.dt;

    if (++since_output >= options.output_every || state.time >= t_end) {
      record(state);
      since_output = 0;
    }
  }
  if (since_output != 0) record(state);
  out.final_state = std::move(state);
  return out;
}

}  // namespace wavecascade
