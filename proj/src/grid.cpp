#include "wavecascade/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wavecascade/errors.hpp"

namespace wavecascade {

OmegaGrid::OmegaGrid(const DispersionRelation& d, std::size_t n_nodes, double spacing)
    : dispersion_(d), h_(spacing) {
  if (n_nodes < 2) throw DomainError("OmegaGrid: need at least two nodes");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw DomainError("OmegaGrid: spacing must be positive and finite");
  }
  radius_.resize(n_nodes);
  mho_.resize(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    radius_[i] = d.invert(omega(i));
    mho_[i] = d.mho(radius_[i]);
  }
  for (std::size_t i = 1; i < n_nodes; ++i) {
    if (!(radius_[i] > radius_[i - 1])) throw NumericError("OmegaGrid: node radii not increasing");
  }
}

OmegaGrid OmegaGrid::from_max(const DispersionRelation& d, std::size_t n_nodes, double omega_max) {
  if (n_nodes < 2) throw DomainError("OmegaGrid: need at least two nodes");
  if (!(omega_max > 0.0)) throw DomainError("OmegaGrid: omega_max must be positive");
  return OmegaGrid(d, n_nodes, omega_max / static_cast<double>(n_nodes - 1));
}

SpectrumState transform_f_to_g(const OmegaGrid& grid, std::span<const double> f_values) {
  if (f_values.size() != grid.size()) throw ContractError("transform_f_to_g: size mismatch");
  SpectrumState s;
  s.g.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(f_values[i] >= 0.0)) throw DomainError("transform_f_to_g: f must be nonnegative");
    s.g[i] = grid.mho(i) * f_values[i] * grid.radius(i);
  }
  return s;
}

std::vector<double> transform_g_to_f(const OmegaGrid& grid, const SpectrumState& state) {
  if (state.g.size() != grid.size()) throw ContractError("transform_g_to_f: size mismatch");
  std::vector<double> f(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double denom = grid.mho(i) * grid.radius(i);
    f[i] = denom > 0.0 ? state.g[i] / denom : 0.0;
  }
  return f;
}

SpectrumState gaussian_bump(const OmegaGrid& grid, double center, double width, double amplitude) {
  if (!(width > 0.0) || !(amplitude >= 0.0)) {
    throw DomainError("gaussian_bump: width must be positive, amplitude nonnegative");
  }
  SpectrumState s;
  s.g.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double z = (grid.omega(i) - center) / width;
    s.g[i] = amplitude * std::exp(-0.5 * z * z);
  }
  return s;
}

SpectrumState ring_profile(const OmegaGrid& grid, double ring_radius, double width,
                           double amplitude) {
  if (!(width > 0.0) || !(amplitude >= 0.0) || !(ring_radius >= 0.0)) {
    throw DomainError("ring_profile: invalid parameters");
  }
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double z = (grid.radius(i) - ring_radius) / width;
    f[i] = amplitude * std::exp(-0.5 * z * z);
  }
  return transform_f_to_g(grid, f);
}

SpectrumState interpolate_table(const OmegaGrid& grid, std::span<const double> omega,
                                std::span<const double> g) {
  if (omega.size() != g.size() || omega.size() < 2) {
    throw ContractError("interpolate_table: need matching omega/g columns with >= 2 rows");
  }
  for (std::size_t k = 1; k < omega.size(); ++k) {
    if (!(omega[k] > omega[k - 1])) throw ContractError("interpolate_table: omega must increase");
  }
  SpectrumState s;
  s.g.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = grid.omega(i);
    if (w < omega.front() || w > omega.back()) continue;
    const auto it = std::upper_bound(omega.begin(), omega.end(), w);
    const std::size_t k = it == omega.end() ? omega.size() - 1
                                            : static_cast<std::size_t>(it - omega.begin());
    const std::size_t k0 = k == 0 ? 0 : k - 1;
    const double t = (w - omega[k0]) / (omega[k] - omega[k0]);
    const double v = (1.0 - t) * g[k0] + t * g[k];
    if (!(v >= 0.0)) throw DomainError("interpolate_table: g must be nonnegative");
    s.g[i] = v;
  }
  return s;
}

}  // namespace wavecascade
