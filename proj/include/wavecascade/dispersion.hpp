#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wavecascade {

// Growth constants of an admissible radial dispersion relation:
//   omega(r) >= c_omega_lower * r^alpha              for all r
//   omega(r) <= c_omega_upper * r^alpha_prime        for r < 1
//   mho(r) = r / omega'(r) <= c_mho * r^iota         for all r
// with 1 < alpha_prime <= alpha <= 2 and 0 <= iota <= 1.
struct GrowthConstants {
  double alpha = 2.0;
  double alpha_prime = 2.0;
  double c_omega_lower = 1.0;
  double c_omega_upper = 1.0;
  double c_mho = 0.5;
  double iota = 0.0;
};

// Outcome of checking the structural assumptions on sampled radii.
struct AssumptionReport {
  bool omega_zero_at_origin = true;
  bool increasing = true;
  bool convex = true;
  bool lower_bound = true;
  bool upper_bound_small_r = true;
  bool mho_bound = true;
  bool mho_nondecreasing = true;
  std::string first_failure;

  bool ok() const {
    return omega_zero_at_origin && increasing && convex && lower_bound &&
           upper_bound_small_r && mho_bound && mho_nondecreasing;
  }
};

// Convex radial dispersion relation omega(|k|) together with
// mho(|k|) = |k| / omega'(|k|). Immutable after construction; all members are
// safe to call concurrently.
class DispersionRelation {
 public:
  enum class Kind { kPowerLaw, kCustom };
  using RadialFn = std::function<double(double)>;

  // omega(r) = r^exponent with exponent in (1, 2].
  static DispersionRelation power_law(double exponent);

  // User supplied omega and omega'. The constants are checked against the
  // callables on a sampled grid; a failed check throws DomainError.
  // mho_at_zero is required when iota == 0 (the limit r -> 0 of mho is then
  // not forced to vanish).
  static DispersionRelation custom(RadialFn omega, RadialFn omega_prime, GrowthConstants constants,
                                   std::optional<double> mho_at_zero = std::nullopt,
                                   std::string name = "custom");

  // omega(r) = r^lower + r^upper with 1 < lower <= upper <= 2. A non power-law
  // member of the admissible class, built through custom().
  static DispersionRelation mixed_power(double lower, double upper);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const GrowthConstants& constants() const { return constants_; }
  // Power-law exponent; NaN for custom relations.
  double exponent() const { return exponent_; }
  bool is_quadratic() const { return kind_ == Kind::kPowerLaw && exponent_ == 2.0; }

  double omega(double r) const;
  double omega_prime(double r) const;
  double mho(double r) const;
  // Radius r >= 0 with omega(r) = w, |omega(r) - w| <= 1e-12 max(1, w).
  double invert(double w) const;

  // Checks every structural assumption on the supplied radii (sorted or not).
  AssumptionReport check_assumptions(std::span<const double> radii) const;
  // Default sample: uniform grids on [0,1], [0,10], [0,1000] plus a geometric
  // grid on [1e-3, 1e3].
  static std::vector<double> default_sample_radii();

 private:
  DispersionRelation() = default;

  Kind kind_ = Kind::kPowerLaw;
  std::string name_;
  double exponent_ = 2.0;
  GrowthConstants constants_;
  double mho_at_zero_ = 0.0;
  // shared so that copies stay cheap; the callables are never mutated.
  std::shared_ptr<const RadialFn> omega_fn_;
  std::shared_ptr<const RadialFn> omega_prime_fn_;
};

}  // namespace wavecascade
