#include "wavecascade/resonance_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

#include <Eigen/Geometry>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wavecascade/errors.hpp"

namespace wavecascade {

namespace {

constexpr double kPi = std::numbers::pi;

using Rng = std::mt19937_64;

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

Vec3 unit_vector(Rng& rng) {
  std::normal_distribution<double> n01;
  Vec3 v;
  do {
    v = Vec3(n01(rng), n01(rng), n01(rng));
  } while (v.squaredNorm() < 1e-24);
  return v.normalized();
}

Vec3 point_in_ball(Rng& rng, const Ball& b) {
  std::uniform_real_distribution<double> u01;
  return b.center + b.radius * std::cbrt(u01(rng)) * unit_vector(rng);
}

// Uniform grid hash over stored points for tolerance-ball membership.
class PointIndex {
 public:
  explicit PointIndex(double cell) : cell_(cell) {}

  void insert(const Vec3& p, std::size_t id) { cells_[key(cell_of(p))].push_back(id); }

  bool near(const Vec3& p, const std::vector<Vec3>& pts) const {
    const auto c = cell_of(p);
    const double tol2 = cell_ * cell_;
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        for (long long dz = -1; dz <= 1; ++dz) {
          const auto it = cells_.find(key({c[0] + dx, c[1] + dy, c[2] + dz}));
          if (it == cells_.end()) continue;
          for (std::size_t id : it->second) {
            if ((pts[id] - p).squaredNorm() <= tol2) return true;
          }
        }
      }
    }
    return false;
  }

 private:
  std::array<long long, 3> cell_of(const Vec3& p) const {
    return {static_cast<long long>(std::floor(p.x() / cell_)),
            static_cast<long long>(std::floor(p.y() / cell_)),
            static_cast<long long>(std::floor(p.z() / cell_))};
  }
  static std::uint64_t key(const std::array<long long, 3>& c) {
    std::uint64_t h = 1469598103934665603ULL;
    for (long long v : c) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 1099511628211ULL;
    }
    return h;
  }

  double cell_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

class Membership {
 public:
  Membership(const PointSet3& set, double tol) : set_(set), index_(tol) {
    for (std::size_t k = 0; k < set.points.size(); ++k) index_.insert(set.points[k], k);
  }

  bool contains(const Vec3& p) const {
    if (set_.generator) {
      const auto& g = *set_.generator;
      if ((p - g.center).norm() <= g.radius) return true;
    }
    return index_.near(p, set_.points);
  }

 private:
  const PointSet3& set_;
  PointIndex index_;
};

Vec3 draw_from(const PointSet3& set, Rng& rng) {
  std::uniform_real_distribution<double> u01;
  const bool use_ball = set.generator && (set.points.empty() || u01(rng) < 0.5);
  if (use_ball) return point_in_ball(rng, *set.generator);
  std::uniform_int_distribution<std::size_t> pick(0, set.points.size() - 1);
  return set.points[pick(rng)];
}

// Smallest s >= 0 with w((1+s)|U|) + w(|1-s||U|) = target; Digamma is even,
// convex and increasing on s >= 0.
double line_parameter(const DispersionRelation& d, double kappa, double target) {
  double lo = 0.0, hi = 1.0;
  if (digamma(d, kappa, lo) >= target) return 0.0;
  while (digamma(d, kappa, hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw NumericError("collision region: resonance line root not bracketed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (digamma(d, kappa, mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double PointSet3::max_radius() const {
  double r = 0.0;
  for (const auto& p : points) r = std::max(r, p.norm());
  if (generator) r = std::max(r, generator->center.norm() + generator->radius);
  return r;
}

std::vector<CollisionRegionStage> iterate_collision_region(const PointSet3& seed,
                                                           const DispersionRelation& d,
                                                           const CollisionRegionOptions& options) {
  if (options.steps == 0) throw DomainError("iterate_collision_region: steps must be >= 1");
  if (seed.points.empty() && !(seed.generator && seed.generator->radius > 0.0)) {
    throw DomainError("iterate_collision_region: seed set is empty");
  }
  const double scale = std::max(seed.max_radius(), 1e-300);
  const double tol = options.tolerance > 0.0 ? options.tolerance : 1e-3 * scale;
  const bool quadratic = d.is_quadratic();

  std::vector<CollisionRegionStage> stages;
  PointSet3 current = seed;
  std::erase_if(current.points, [tol](const Vec3& p) { return p.norm() < tol; });
  Rng rng = make_rng(options.seed, 0);
  std::uniform_real_distribution<double> u01;

  for (std::size_t s = 0; s < options.steps; ++s) {
    const Membership member(current, tol);
    std::vector<Vec3> fresh;
    PointIndex fresh_index(tol);
    for (std::size_t t = 0; t < options.samples_per_step; ++t) {
      const Vec3 k1 = draw_from(current, rng);
      const Vec3 k2 = draw_from(current, rng);
      const Vec3 sum = k1 + k2;
      if (sum.norm() <= 1e-12 * scale) continue;
      Vec3 k;
      if (quadratic) {
        const Vec3 mid = 0.5 * sum;
        k = mid + 0.5 * (k1 - k2).norm() * unit_vector(rng);
      } else {
        const Vec3 u = 0.5 * sum;
        const double target = d.omega(k1.norm()) + d.omega(k2.norm());
        const double sp = line_parameter(d, u.norm(), target);
        // Either end of the resonant pair can play the role of k.
        k = (u01(rng) < 0.5 ? 1.0 + sp : 1.0 - sp) * u;
      }
      const Vec3 k3 = sum - k;
      if (k.norm() < tol || !member.contains(k3)) continue;
      if (member.contains(k) || fresh_index.near(k, fresh)) continue;
      fresh_index.insert(k, fresh.size());
      fresh.push_back(k);
    }
    CollisionRegionStage stage;
    stage.accepted = fresh.size();
    stage.stagnated = fresh.empty();
    current.points.insert(current.points.end(), fresh.begin(), fresh.end());
    stage.set = current;
    stage.max_radius = current.max_radius();
    stages.push_back(std::move(stage));
  }
  return stages;
}

double cap_coverage_expectation(double q, long long caps) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("cap_coverage_expectation: q must lie in (0, 1)");
  if (caps < 1) throw DomainError("cap_coverage_expectation: need at least one cap");
  return 1.0 - std::pow(1.0 - q, static_cast<double>(caps));
}

long long least_covering_caps(double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("least_covering_caps: q must lie in (0, 1)");
  long long n = 1;
  double miss = 1.0 - q;
  while (!(miss < q / 10.0)) {
    miss *= 1.0 - q;
    ++n;
  }
  return n;
}

namespace {

MonteCarloEstimate mean_and_error(const std::vector<double>& xs) {
  MonteCarloEstimate e;
  const auto n = static_cast<double>(xs.size());
  for (double x : xs) e.mean += x;
  e.mean /= n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - e.mean) * (x - e.mean);
    e.sigma = std::sqrt(ss / (n - 1.0) / n);
  }
  return e;
}

}  // namespace

MonteCarloEstimate monte_carlo_cap_coverage(double q, long long caps, std::size_t configurations,
                                            std::size_t points, std::uint64_t seed) {
  cap_coverage_expectation(q, caps);  // argument checks
  if (configurations < 2 || points < 1) {
    throw DomainError("monte_carlo_cap_coverage: need >= 2 configurations and >= 1 point");
  }
  // A cap of area fraction q is {p : p.c >= 1 - 2q}.
  const double cos_edge = 1.0 - 2.0 * q;
  std::vector<double> fractions(configurations);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(configurations); ++c) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(c));
    std::vector<Vec3> centers(static_cast<std::size_t>(caps));
    for (auto& v : centers) v = unit_vector(rng);
    std::size_t covered = 0;
    for (std::size_t p = 0; p < points; ++p) {
      const Vec3 x = unit_vector(rng);
      for (const auto& v : centers) {
        if (x.dot(v) >= cos_edge) {
          ++covered;
          break;
        }
      }
    }
    fractions[static_cast<std::size_t>(c)] =
        static_cast<double>(covered) / static_cast<double>(points);
  }
  return mean_and_error(fractions);
}

double vcone(double radius, double rho) {
  if (!(radius > 0.0) || !(rho >= 0.0 && rho <= radius)) {
    throw DomainError("vcone: need R > 0 and 0 <= rho <= R");
  }
  return 2.0 * kPi / 3.0 * radius * radius * (radius - rho);
}

MonteCarloEstimate monte_carlo_vcone(double radius, double rho, std::size_t samples,
                                     std::uint64_t seed) {
  vcone(radius, rho);  // argument checks
  if (samples < 2) throw DomainError("monte_carlo_vcone: need at least 2 samples");
  constexpr std::size_t kBatches = 64;
  const Vec3 axis = Vec3::UnitZ();
  std::vector<std::size_t> hits(kBatches, 0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(kBatches); ++b) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(b));
    std::uniform_real_distribution<double> box(-radius, radius);
    const std::size_t begin = samples * static_cast<std::size_t>(b) / kBatches;
    const std::size_t end = samples * static_cast<std::size_t>(b + 1) / kBatches;
    std::size_t h = 0;
    for (std::size_t s = begin; s < end; ++s) {
      const Vec3 x(box(rng), box(rng), box(rng));
      const double len = x.norm();
      if (len <= radius && x.dot(axis) >= len * rho / radius) ++h;
    }
    hits[static_cast<std::size_t>(b)] = h;
  }
  std::size_t total = 0;
  for (auto h : hits) total += h;
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(total) / n;
  const double box_volume = 8.0 * radius * radius * radius;
  return {box_volume * p, box_volume * std::sqrt(p * (1.0 - p) / n)};
}

ExpandedRadius expanded_radius(double r, double big_r) {
  if (!(r >= 0.0) || !(big_r > 0.0) || big_r * big_r < 45.0 * r * r) {
    throw DomainError("expanded_radius: need r >= 0, R > 0 and R^2 >= 45 r^2");
  }
  ExpandedRadius out;
  out.value = std::sqrt(big_r * big_r - 45.0 * r * r) + 3.0 * std::numbers::sqrt2 * r;
  out.grows = out.value > big_r;
  return out;
}

double digamma(const DispersionRelation& d, double kappa, double s) {
  return d.omega(std::abs(1.0 + s) * kappa) + d.omega(std::abs(1.0 - s) * kappa);
}

SpreadingRoot digamma_root(const DispersionRelation& d, double big_r) {
  if (!(big_r > 0.0) || !std::isfinite(big_r)) throw DomainError("digamma_root: R must be positive");
  if (d.is_quadratic()) {
    throw DomainError("digamma_root: quadratic dispersion is handled by the sphere construction");
  }
  const double kappa = 0.5 * big_r;
  SpreadingRoot out;
  out.target = 2.0 * d.omega(big_r);
  out.f_lo = digamma(d, kappa, 1.0);
  out.f_hi = digamma(d, kappa, 2.0);
  if (!(out.f_lo < out.target && out.target < out.f_hi)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "digamma_root: Digamma(1) = " << out.f_lo << ", Digamma(2) = " << out.f_hi
        << " do not bracket 2 w(R) = " << out.target;
    throw BracketError(msg.str(), out.f_lo, out.f_hi, out.target);
  }
  double lo = 1.0, hi = 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (digamma(d, kappa, mid) < out.target ? lo : hi) = mid;
  }
  const double r_lo = std::abs(digamma(d, kappa, lo) - out.target);
  const double r_hi = std::abs(digamma(d, kappa, hi) - out.target);
  out.s0 = r_lo <= r_hi ? lo : hi;
  out.residual = std::min(r_lo, r_hi);
  if (out.residual > 1e-10 * std::max(1.0, out.target)) {
    throw NumericError("digamma_root: bisection stalled with residual " +
                       std::to_string(out.residual));
  }
  return out;
}

ResonanceManifold::ResonanceManifold(const DispersionRelation& d, const Vec3& k2, const Vec3& k3)
    : d_(d), k2_(k2), k3_(k3), gamma_(k2 + k3),
      energy_(d.omega(k2.norm()) + d.omega(k3.norm())) {
  if (!(gamma_.norm() > 0.0)) throw DomainError("resonance manifold: k2 + k3 must be nonzero");
}

double ResonanceManifold::g(const Vec3& x) const {
  return d_.omega((gamma_ - x).norm()) + d_.omega(x.norm()) - energy_;
}

double ResonanceManifold::partner_radius(double u) const {
  return d_.invert(std::max(energy_ - d_.omega(u), 0.0));
}

ResonanceManifold::Range ResonanceManifold::radius_range() const {
  // Collinear points x = beta gamma bound |x|. F is convex and symmetric about
  // beta = 1/2, so the admissible betas form [beta_lo, 1 - beta_lo].
  const double len = gamma_.norm();
  const auto f = [&](double beta) {
    return d_.omega(std::abs(1.0 - beta) * len) + d_.omega(std::abs(beta) * len) - energy_;
  };
  Range out;
  if (!(f(0.5) < 0.0)) return out;
  double inside = 0.5, outside = 0.0, step = 0.5;
  while (f(outside) < 0.0) {
    inside = outside;
    step *= 2.0;
    outside = 0.5 - step;
    if (step > 1e15) throw NumericError("resonance manifold: unbounded admissible range");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (inside + outside);
    if (mid == inside || mid == outside) break;
    (f(mid) < 0.0 ? inside : outside) = mid;
  }
  const double beta_lo = 0.5 * (inside + outside);
  out.a = std::abs(beta_lo) * len;
  out.b = (1.0 - beta_lo) * len;
  out.empty = !(out.b > out.a);
  return out;
}

Vec3 ResonanceManifold::point(double u, double phi) const {
  const double len = gamma_.norm();
  const Vec3 axis = gamma_ / len;
  const double v = partner_radius(u);
  const double along = (u * u + len * len - v * v) / (2.0 * len);
  const double across = std::sqrt(std::max(u * u - along * along, 0.0));
  const Vec3 e1 = axis.unitOrthogonal();
  const Vec3 e2 = axis.cross(e1);
  return along * axis + across * (std::cos(phi) * e1 + std::sin(phi) * e2);
}

ManifoldIntegral manifold_quadrature(const ResonanceManifold& m,
                                     const std::function<double(double)>& integrand,
                                     double rel_tol) {
  ManifoldIntegral out;
  const auto range = m.radius_range();
  out.a = range.a;
  out.b = range.b;
  if (range.empty) {
    out.empty = true;
    return out;
  }
  const auto& d = m.dispersion();
  const auto f = [&](double u) { return integrand(u) * u * d.mho(m.partner_radius(u)); };
  double err = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, range.a, range.b, 15, rel_tol, &err);
  const double factor = 2.0 * kPi / m.gamma().norm();
  out.value = factor * integral;
  out.error_estimate = factor * err;
  return out;
}

double sphere_polynomial_oracle(const Vec3& k2, const Vec3& k3,
                                const std::vector<double>& coefficients) {
  const Vec3 gamma = k2 + k3;
  const double len = gamma.norm();
  if (!(len > 0.0)) throw DomainError("sphere_polynomial_oracle: k2 + k3 must be nonzero");
  const double c = 0.5 * len;
  const double a = 0.5 * (k2 - k3).norm();
  const double lo = std::abs(c - a), hi = c + a;
  double s = 0.0;
  for (std::size_t p = 0; p < coefficients.size(); ++p) {
    const double e = static_cast<double>(p) + 2.0;
    s += coefficients[p] * (std::pow(hi, e) - std::pow(lo, e)) / e;
  }
  return kPi / len * s;
}

MonteCarloEstimate mollified_delta_estimate(const ResonanceManifold& m,
                                            const std::function<double(double)>& integrand,
                                            double eps_rel, std::size_t samples,
                                            std::uint64_t seed) {
  constexpr std::size_t kReplicates = 8;
  if (!(eps_rel > 0.0) || samples < kReplicates) {
    throw DomainError("mollified_delta_estimate: need eps > 0 and at least 8 directions");
  }
  const double eps = eps_rel * m.energy();
  // G is convex and symmetric under x -> gamma - x, so it is smallest at
  // gamma / 2 and nondecreasing along every ray from there. The shell
  // |G| < eps is then one radial interval per direction.
  const Vec3 center = 0.5 * m.gamma();
  const double g_center = m.g(center);
  const auto side = static_cast<std::size_t>(
      std::max(1.0, std::floor(std::sqrt(static_cast<double>(samples / kReplicates)))));

  std::vector<double> replicate(kReplicates, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t rep = 0; rep < static_cast<std::ptrdiff_t>(kReplicates); ++rep) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(rep));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double acc = 0.0;
    for (std::size_t iz = 0; iz < side; ++iz) {
      for (std::size_t ip = 0; ip < side; ++ip) {
        // Jittered equal-area cell in (cos theta, phi).
        const double z = -1.0 + 2.0 * (static_cast<double>(iz) + unit(rng)) / side;
        const double phi = 2.0 * kPi * (static_cast<double>(ip) + unit(rng)) / side;
        const double st = std::sqrt(std::max(0.0, 1.0 - z * z));
        const Vec3 dir(st * std::cos(phi), st * std::sin(phi), z);
        const auto level_radius = [&](double t) {
          if (t <= g_center) return 0.0;
          double lo = 0.0, hi = 1.0;
          while (m.g(center + hi * dir) <= t) {
            lo = hi;
            hi *= 2.0;
          }
          for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            (m.g(center + mid * dir) <= t ? lo : hi) = mid;
          }
          return 0.5 * (lo + hi);
        };
        // Box mollifier 1{|G| < e} / (2e) integrated along the ray.
        const auto shell = [&](double e) {
          const auto f = [&](double r) { return r * r * integrand((center + r * dir).norm()); };
          return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
                     f, level_radius(-e), level_radius(e), 0) /
                 (2.0 * e);
        };
        // Richardson on the O(eps^2) bias of a symmetric mollifier.
        acc += 4.0 * kPi * (4.0 * shell(0.5 * eps) - shell(eps)) / 3.0;
      }
    }
    replicate[static_cast<std::size_t>(rep)] = acc / static_cast<double>(side * side);
  }
  MonteCarloEstimate e;
  for (double v : replicate) e.mean += v;
  e.mean /= kReplicates;
  double var = 0.0;
  for (double v : replicate) var += (v - e.mean) * (v - e.mean);
  e.sigma = std::sqrt(var / (kReplicates - 1) / kReplicates);
  return e;
}

}  // namespace wavecascade
