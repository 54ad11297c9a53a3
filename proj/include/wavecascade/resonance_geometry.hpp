#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "wavecascade/dispersion.hpp"

namespace wavecascade {

using Vec3 = Eigen::Vector3d;

struct Ball {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
};

// Finite sample of a wavenumber set, optionally backed by a generating ball
// that counts as part of the set. The origin is never stored.
struct PointSet3 {
  std::vector<Vec3> points;
  std::optional<Ball> generator;

  double max_radius() const;
};

struct CollisionRegionOptions {
  std::size_t steps = 1;
  std::size_t samples_per_step = 10'000;
  std::uint64_t seed = 1;
  // Membership tolerance for stored points; <= 0 means 1e-3 times the seed scale.
  double tolerance = 0.0;
};

struct CollisionRegionStage {
  PointSet3 set;                  // cumulative set after this stage
  std::size_t accepted = 0;       // new points added in this stage
  double max_radius = 0.0;        // of the cumulative set
  bool stagnated = false;         // no point accepted during the stage
};

// Monte-Carlo growth of the collisional region. Each trial draws k1, k2 from
// the current cumulative set (k1 + k2 != 0) and builds a resonant pair
// (k, k3) with k + k3 = k1 + k2 and w(k) + w(k3) = w(k1) + w(k2): on the sphere
// with diameter [k1, k2] when w = |k|^2, on the line through the midpoint
// otherwise. k is accepted if k3 lies in the current set and k != 0.
// Throws DomainError if the seed is empty or steps == 0.
std::vector<CollisionRegionStage> iterate_collision_region(const PointSet3& seed,
                                                           const DispersionRelation& d,
                                                           const CollisionRegionOptions& options);

// 1 - (1 - q)^N for N independent caps of area fraction q.
double cap_coverage_expectation(double q, long long caps);

// Least N with (1 - q)^N < q / 10.
long long least_covering_caps(double q);

struct MonteCarloEstimate {
  double mean = 0.0;
  double sigma = 0.0;  // standard error of the mean
};

// Fraction of the unit sphere covered by `caps` uniformly placed caps of area
// fraction q. `configurations` independent cap layouts, each probed with
// `points` uniform test points; sigma comes from the spread across layouts.
MonteCarloEstimate monte_carlo_cap_coverage(double q, long long caps, std::size_t configurations,
                                            std::size_t points, std::uint64_t seed);

// Volume of the spherical cone {x in B(x0, R) : (x - x0).sigma >= |x - x0| rho / R}:
// (2 pi / 3) R^2 (R - rho). Requires R > 0 and 0 <= rho <= R.
double vcone(double radius, double rho);

// Hit-or-miss estimate of the same volume from the set definition.
MonteCarloEstimate monte_carlo_vcone(double radius, double rho, std::size_t samples,
                                     std::uint64_t seed);

struct ExpandedRadius {
  double value = 0.0;
  bool grows = false;  // value > R
};

// sqrt(R^2 - 45 r^2) + 3 sqrt(2) r. DomainError unless r >= 0, R > 0 and R^2 >= 45 r^2.
ExpandedRadius expanded_radius(double r, double big_r);

// Digamma(s) = w(|1 + s| kappa) + w(|1 - s| kappa).
double digamma(const DispersionRelation& d, double kappa, double s);

struct SpreadingRoot {
  double s0 = 0.0;
  double residual = 0.0;  // |Digamma(s0) - 2 w(R)|
  double f_lo = 0.0;      // Digamma(1)
  double f_hi = 0.0;      // Digamma(2)
  double target = 0.0;    // 2 w(R)
};

// Root of Digamma(s) = 2 w(R) on [1, 2] with kappa = R cos(pi/3) = R/2.
// DomainError for R <= 0 or a quadratic dispersion (that case uses the sphere
// construction); BracketError if Digamma(1) < 2 w(R) < Digamma(2) fails.
SpreadingRoot digamma_root(const DispersionRelation& d, double big_r);

// Resonance manifold G(x) = w(|k2 + k3 - x|) + w(|x|) - w(|k2|) - w(|k3|) = 0.
class ResonanceManifold {
 public:
  // DomainError if k2 + k3 = 0.
  ResonanceManifold(const DispersionRelation& d, const Vec3& k2, const Vec3& k3);

  const DispersionRelation& dispersion() const { return d_; }
  const Vec3& k2() const { return k2_; }
  const Vec3& k3() const { return k3_; }
  const Vec3& gamma() const { return gamma_; }
  double energy() const { return energy_; }  // w(|k2|) + w(|k3|)

  double g(const Vec3& x) const;
  // |gamma - x| for a point with |x| = u on the manifold.
  double partner_radius(double u) const;

  // Admissible |x| range [a, b]; empty when the manifold is a point or void.
  struct Range {
    double a = 0.0, b = 0.0;
    bool empty = true;
  };
  Range radius_range() const;

  // Point on the manifold with |x| = u at azimuth phi about gamma.
  Vec3 point(double u, double phi) const;

 private:
  DispersionRelation d_;
  Vec3 k2_, k3_, gamma_;
  double energy_;
};

struct ManifoldIntegral {
  double value = 0.0;
  bool empty = false;
  double a = 0.0, b = 0.0;  // |x| range used
  double error_estimate = 0.0;
};

// int F(|x|) dmu(x) / |grad G(x)| over the manifold, reduced to
//   (2 pi / |gamma|) int_a^b F(u) u mho(v(u)) du,   w(v(u)) = E - w(u).
ManifoldIntegral manifold_quadrature(const ResonanceManifold& m,
                                     const std::function<double(double)>& integrand,
                                     double rel_tol = 1e-12);

// w = |k|^2 only: the manifold is the sphere with diameter [k2, k3], |grad G|
// is constant there, and for a polynomial F(u) = sum c_p u^p the integral is
//   (pi / |gamma|) sum c_p (b^{p+2} - a^{p+2}) / (p + 2).
double sphere_polynomial_oracle(const Vec3& k2, const Vec3& k3,
                                const std::vector<double>& coefficients);

// Monte-Carlo of int F(|x|) delta_eps(G(x)) dx with the box mollifier
// 1{|G| < eps} / (2 eps), Richardson-extrapolated from eps and eps/2. The
// integral is taken in polar coordinates about gamma / 2: `samples`
// directions in 8 independent stratified sweeps, each ray integrated over
// its shell interval by Gauss-Kronrod. sigma comes from the sweep spread.
// eps is relative to E.
MonteCarloEstimate mollified_delta_estimate(const ResonanceManifold& m,
                                            const std::function<double(double)>& integrand,
                                            double eps_rel, std::size_t samples,
                                            std::uint64_t seed);

}  // namespace wavecascade
