#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wavecascade/dispersion.hpp"

namespace wavecascade {

// Uniform frequency grid omega_i = i h, i = 0..n-1. Uniform spacing makes the
// resonant frequency omega_i + omega_j - omega_l land on node i + j - l.
class OmegaGrid {
 public:
  OmegaGrid(const DispersionRelation& d, std::size_t n_nodes, double spacing);
  // h = omega_max / (n_nodes - 1).
  static OmegaGrid from_max(const DispersionRelation& d, std::size_t n_nodes, double omega_max);

  std::size_t size() const { return radius_.size(); }
  double spacing() const { return h_; }
  double omega(std::size_t i) const { return static_cast<double>(i) * h_; }
  double omega_max() const { return omega(size() - 1); }
  double radius(std::size_t i) const { return radius_[i]; }
  double mho(std::size_t i) const { return mho_[i]; }
  std::span<const double> radii() const { return radius_; }
  std::span<const double> mhos() const { return mho_; }
  const DispersionRelation& dispersion() const { return dispersion_; }

  bool same_nodes(const OmegaGrid& other) const {
    return size() == other.size() && h_ == other.h_;
  }

 private:
  DispersionRelation dispersion_;
  double h_;
  std::vector<double> radius_;
  std::vector<double> mho_;
};

// Transformed density g(omega) = mho f |k| at the grid nodes.
struct SpectrumState {
  std::vector<double> g;
  double time = 0.0;
};

// g_i = mho(r_i) f_i r_i for f sampled at the node radii.
SpectrumState transform_f_to_g(const OmegaGrid& grid, std::span<const double> f_values);
// Inverse of transform_f_to_g; node 0 (r = 0) is reported as 0.
std::vector<double> transform_g_to_f(const OmegaGrid& grid, const SpectrumState& state);

// Initial data presets.
SpectrumState gaussian_bump(const OmegaGrid& grid, double center, double width, double amplitude);
// f(r) = amplitude exp(-(r - ring_radius)^2 / (2 width^2)), transformed to g.
SpectrumState ring_profile(const OmegaGrid& grid, double ring_radius, double width,
                           double amplitude);
// Piecewise-linear interpolation of (omega, g) samples onto the grid; zero
// outside the sampled range.
SpectrumState interpolate_table(const OmegaGrid& grid, std::span<const double> omega,
                                std::span<const double> g);

}  // namespace wavecascade
