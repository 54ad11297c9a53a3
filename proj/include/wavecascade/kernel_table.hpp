#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "wavecascade/collision_kernel.hpp"
#include "wavecascade/grid.hpp"

namespace wavecascade {

// Which resonant triples survive the finite frequency window.
enum class Truncation {
  // Keep (i, j, l) only if every resonant partner of the multiset {i, j, l}
  // stays on the grid: with a >= b >= c its sorted indices, a + b - c < n.
  // Each kept interaction still conserves mass and energy, and the
  // convex-test-function pairing argument goes through term by term.
  kClosed,
  // Keep (i, j, l) whenever m = i + j - l < n.
  kResonant,
};

struct KernelEntry {
  std::uint32_t i, j, l, m;
  // C_Q K_n(omega_i, omega_j, omega_l) times the (i <-> j) multiplicity.
  double weight;
};

struct KernelBuildOptions {
  Truncation truncation = Truncation::kClosed;
  // Store i <= j only, doubling the weight when i < j.
  bool deduplicate = true;
  // Keep zero-weight triples (useful for structural tests).
  bool keep_zero_weights = false;
  std::size_t memory_budget_bytes = std::size_t{2} << 30;
};

// Immutable list of admissible triples with their collision weights, in
// lexicographic (i, j, l) order.
class KernelTable {
 public:
  static KernelTable build(const KernelWeights& kw, const OmegaGrid& grid,
                           const KernelBuildOptions& options = {});

  // Upper bound on table bytes for n nodes, used for the budget check.
  static std::size_t estimate_bytes(std::size_t n_nodes, const KernelBuildOptions& options);

  const OmegaGrid& grid() const { return grid_; }
  const KernelWeights& weights() const { return weights_; }
  const KernelBuildOptions& options() const { return options_; }
  std::span<const KernelEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::uint64_t fingerprint() const { return fingerprint_; }

  // Versioned binary cache keyed by fingerprint(). load() throws
  // ContractError if the file belongs to a different (grid, dispersion,
  // cut-off, truncation).
  void save(const std::filesystem::path& path) const;
  static KernelTable load(const std::filesystem::path& path, const KernelWeights& kw,
                          const OmegaGrid& grid, const KernelBuildOptions& options = {});

 private:
  KernelTable(const KernelWeights& kw, const OmegaGrid& grid, const KernelBuildOptions& options);

  KernelWeights weights_;
  OmegaGrid grid_;
  KernelBuildOptions options_;
  std::uint64_t fingerprint_ = 0;
  std::vector<KernelEntry> entries_;
};

std::uint64_t table_fingerprint(const KernelWeights& kw, const OmegaGrid& grid,
                                const KernelBuildOptions& options);

}  // namespace wavecascade
