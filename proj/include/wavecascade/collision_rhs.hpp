#pragma once

#include <span>
#include <vector>

#include "wavecascade/grid.hpp"
#include "wavecascade/kernel_table.hpp"

namespace wavecascade {

// Work split for the OpenMP kernel. The table is cut into `chunks`
// contiguous pieces, each accumulated into its own buffer, and buffers are
// merged in chunk order. The result therefore depends on `chunks` but not on
// the thread count.
struct ParallelOptions {
  int chunks = 64;
  int threads = 0;  // 0: OpenMP default
};

// Four-point stencil of the discrete weak form. For every entry
//   rho = W g_i g_j g_l h^2,   out[i] -= rho, out[j] -= rho, out[l] += rho, out[m] += rho.
// Serial reference; kept for testing the parallel kernel.
void collision_rhs_reference(const KernelTable& table, std::span<const double> g,
                             std::span<double> out);

// OpenMP kernel, see ParallelOptions.
void collision_rhs_parallel(const KernelTable& table, std::span<const double> g,
                            std::span<double> out, const ParallelOptions& options = {});

// dg/dt for a state on the table's grid; throws ContractError on a size
// mismatch.
std::vector<double> rhs(const KernelTable& table, const SpectrumState& state,
                        const ParallelOptions& options = {});

// Sum of |rho| over all deposits (4 per entry); the natural scale for the
// conservation residuals.
double deposit_magnitude(const KernelTable& table, std::span<const double> g);

}  // namespace wavecascade
