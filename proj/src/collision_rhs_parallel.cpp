#include <algorithm>
#include <vector>

#include <omp.h>

#include "wavecascade/collision_rhs.hpp"

namespace wavecascade {

void collision_rhs_parallel(const KernelTable& table, std::span<const double> g,
                            std::span<double> out, const ParallelOptions& options) {
  const std::size_t n = out.size();
  const auto entries = table.entries();
  const double h = table.grid().spacing();
  const double h2 = h * h;
  const auto total = static_cast<std::ptrdiff_t>(entries.size());
  const auto chunks = static_cast<std::ptrdiff_t>(std::max(1, options.chunks));

  std::vector<double> partial(static_cast<std::size_t>(chunks) * n, 0.0);
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();

#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::ptrdiff_t c = 0; c < chunks; ++c) {
    const std::ptrdiff_t begin = total * c / chunks;
    const std::ptrdiff_t end = total * (c + 1) / chunks;
    double* acc = partial.data() + static_cast<std::size_t>(c) * n;
    for (std::ptrdiff_t k = begin; k < end; ++k) {
      const KernelEntry& e = entries[static_cast<std::size_t>(k)];
      const double rho = e.weight * g[e.i] * g[e.j] * g[e.l] * h2;
      acc[e.i] -= rho;
      acc[e.j] -= rho;
      acc[e.l] += rho;
      acc[e.m] += rho;
    }
  }

  std::fill(out.begin(), out.end(), 0.0);
  for (std::ptrdiff_t c = 0; c < chunks; ++c) {
    const double* acc = partial.data() + static_cast<std::size_t>(c) * n;
    for (std::size_t p = 0; p < n; ++p) out[p] += acc[p];
  }
}

}  // namespace wavecascade
