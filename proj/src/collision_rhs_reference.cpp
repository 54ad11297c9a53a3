#include <algorithm>
#include <cmath>

#include "wavecascade/collision_rhs.hpp"
#include "wavecascade/errors.hpp"

namespace wavecascade {

void collision_rhs_reference(const KernelTable& table, std::span<const double> g,
                             std::span<double> out) {
  const double h = table.grid().spacing();
  const double h2 = h * h;
  std::fill(out.begin(), out.end(), 0.0);
  for (const KernelEntry& e : table.entries()) {
    const double rho = e.weight * g[e.i] * g[e.j] * g[e.l] * h2;
    out[e.i] -= rho;
    out[e.j] -= rho;
    out[e.l] += rho;
    out[e.m] += rho;
  }
}

std::vector<double> rhs(const KernelTable& table, const SpectrumState& state,
                        const ParallelOptions& options) {
  if (state.g.size() != table.grid().size()) {
    throw ContractError("rhs: state has " + std::to_string(state.g.size()) +
                        " nodes but the kernel table grid has " +
                        std::to_string(table.grid().size()));
  }
  std::vector<double> out(state.g.size());
  collision_rhs_parallel(table, state.g, out, options);
  return out;
}

double deposit_magnitude(const KernelTable& table, std::span<const double> g) {
  const double h = table.grid().spacing();
  double total = 0.0;
  for (const KernelEntry& e : table.entries()) {
    total += 4.0 * std::abs(e.weight * g[e.i] * g[e.j] * g[e.l]);
  }
  return total * h * h;
}

}  // namespace wavecascade
