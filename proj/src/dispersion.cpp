#include "wavecascade/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wavecascade/errors.hpp"

namespace wavecascade {

namespace {

void require_radius(double r, const char* what) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    std::ostringstream msg;
    msg << what << ": radius must be finite and nonnegative, got " << r;
    throw DomainError(msg.str());
  }
}

void validate_constants(const GrowthConstants& c) {
  auto fail = [](const std::string& m) { throw DomainError("dispersion constants: " + m); };
  if (!(c.alpha > 1.0 && c.alpha <= 2.0)) fail("alpha must lie in (1, 2]");
  if (!(c.alpha_prime > 1.0 && c.alpha_prime <= c.alpha)) fail("alpha_prime must lie in (1, alpha]");
  if (!(c.c_omega_lower > 0.0) || !(c.c_omega_upper > 0.0)) fail("C_omega constants must be positive");
  if (!(c.c_mho >= 0.0)) fail("c_mho must be nonnegative");
  if (!(c.iota >= 0.0 && c.iota <= 1.0)) fail("iota must lie in [0, 1]");
}

}  // namespace

DispersionRelation DispersionRelation::power_law(double exponent) {
  if (!(exponent > 1.0 && exponent <= 2.0)) {
    std::ostringstream msg;
    msg << "power-law exponent must lie in (1, 2], got " << exponent;
    throw DomainError(msg.str());
  }
  DispersionRelation d;
  d.kind_ = Kind::kPowerLaw;
  d.exponent_ = exponent;
  std::ostringstream name;
  name << "power_law(" << exponent << ")";
  d.name_ = name.str();
  d.constants_ = GrowthConstants{exponent, exponent, 1.0, 1.0, 1.0 / exponent, 2.0 - exponent};
  // mho = r^{2-alpha} / alpha, whose r -> 0 limit is 1/2 for alpha = 2.
  d.mho_at_zero_ = exponent == 2.0 ? 0.5 : 0.0;
  return d;
}

DispersionRelation DispersionRelation::custom(RadialFn omega, RadialFn omega_prime,
                                              GrowthConstants constants,
                                              std::optional<double> mho_at_zero, std::string name) {
  if (!omega || !omega_prime) throw DomainError("custom dispersion: omega and omega' are required");
  validate_constants(constants);
  DispersionRelation d;
  d.kind_ = Kind::kCustom;
  d.name_ = std::move(name);
  d.exponent_ = std::numeric_limits<double>::quiet_NaN();
  d.constants_ = constants;
  d.omega_fn_ = std::make_shared<const RadialFn>(std::move(omega));
  d.omega_prime_fn_ = std::make_shared<const RadialFn>(std::move(omega_prime));
  if (constants.iota > 0.0) {
    d.mho_at_zero_ = 0.0;
  } else if (mho_at_zero && *mho_at_zero >= 0.0 && std::isfinite(*mho_at_zero)) {
    d.mho_at_zero_ = *mho_at_zero;
  } else {
    throw DomainError("custom dispersion: iota == 0 requires a finite mho(0) limit");
  }
  const AssumptionReport report = d.check_assumptions(default_sample_radii());
  if (!report.ok()) throw DomainError("custom dispersion '" + d.name_ + "': " + report.first_failure);
  return d;
}

DispersionRelation DispersionRelation::mixed_power(double lower, double upper) {
  if (!(lower > 1.0 && lower <= upper && upper <= 2.0)) {
    throw DomainError("mixed_power: need 1 < lower <= upper <= 2");
  }
  GrowthConstants c;
  c.alpha = lower;
  c.alpha_prime = lower;
  c.c_omega_lower = 1.0;
  c.c_omega_upper = 2.0;
  c.c_mho = 1.0 / lower;
  c.iota = 2.0 - lower;
  std::optional<double> mho0;
  if (c.iota == 0.0) mho0 = 0.25;  // lower == upper == 2: omega = 2 r^2
  std::ostringstream name;
  name << "mixed_power(" << lower << "," << upper << ")";
  return custom([lower, upper](double r) { return std::pow(r, lower) + std::pow(r, upper); },
                [lower, upper](double r) {
                  return lower * std::pow(r, lower - 1.0) + upper * std::pow(r, upper - 1.0);
                },
                c, mho0, name.str());
}

double DispersionRelation::omega(double r) const {
  require_radius(r, "omega");
  if (kind_ == Kind::kPowerLaw) return exponent_ == 2.0 ? r * r : std::pow(r, exponent_);
  return (*omega_fn_)(r);
}

double DispersionRelation::omega_prime(double r) const {
  require_radius(r, "omega'");
  if (kind_ == Kind::kPowerLaw) {
    return exponent_ == 2.0 ? 2.0 * r : exponent_ * std::pow(r, exponent_ - 1.0);
  }
  return (*omega_prime_fn_)(r);
}

double DispersionRelation::mho(double r) const {
  require_radius(r, "mho");
  if (r == 0.0) return mho_at_zero_;
  if (kind_ == Kind::kPowerLaw) {
    return exponent_ == 2.0 ? 0.5 : std::pow(r, 2.0 - exponent_) / exponent_;
  }
  return r / (*omega_prime_fn_)(r);
}

double DispersionRelation::invert(double w) const {
  if (!std::isfinite(w) || w < 0.0) {
    std::ostringstream msg;
    msg << "invert_omega: frequency must be finite and nonnegative, got " << w;
    throw DomainError(msg.str());
  }
  if (w == 0.0) return 0.0;
  if (kind_ == Kind::kPowerLaw) return exponent_ == 2.0 ? std::sqrt(w) : std::pow(w, 1.0 / exponent_);

  // omega(r) >= C_omega r^alpha puts the root below (w / C_omega)^{1/alpha}.
  double lo = 0.0;
  double hi = std::max(1.0, std::pow(w / constants_.c_omega_lower, 1.0 / constants_.alpha));
  const double tol = 1e-12 * std::max(1.0, w);
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f = omega(mid) - w;
    if (f == 0.0) return mid;
    (f < 0.0 ? lo : hi) = mid;
  }
  const double r = (w - omega(lo) <= omega(hi) - w) ? lo : hi;
  if (std::abs(omega(r) - w) > tol) {
    std::ostringstream msg;
    msg << "invert_omega: bisection residual " << std::abs(omega(r) - w) << " above " << tol;
    throw NumericError(msg.str());
  }
  return r;
}

std::vector<double> DispersionRelation::default_sample_radii() {
  std::vector<double> r;
  for (int k = 0; k <= 200; ++k) r.push_back(k / 200.0);
  for (int k = 0; k <= 200; ++k) r.push_back(10.0 * k / 200.0);
  for (int k = 0; k <= 200; ++k) r.push_back(1000.0 * k / 200.0);
  for (int k = 0; k <= 240; ++k) r.push_back(std::pow(10.0, -3.0 + 6.0 * k / 240.0));
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

AssumptionReport DispersionRelation::check_assumptions(std::span<const double> radii) const {
  std::vector<double> r(radii.begin(), radii.end());
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());

  AssumptionReport rep;
  auto note = [&rep](bool& flag, const std::string& msg) {
    if (flag && rep.first_failure.empty()) rep.first_failure = msg;
    flag = false;
  };
  const GrowthConstants& c = constants_;

  if (omega(0.0) != 0.0) note(rep.omega_zero_at_origin, "omega(0) != 0");

  std::vector<double> w(r.size()), m(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    w[k] = omega(r[k]);
    m[k] = mho(r[k]);
  }
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double rk = r[k];
    std::ostringstream at;
    at << " at r=" << rk;
    if (rk > 0.0 && !(w[k] >= c.c_omega_lower * std::pow(rk, c.alpha) * (1.0 - 1e-12))) {
      note(rep.lower_bound, "omega >= C_omega r^alpha violated" + at.str());
    }
    if (rk > 0.0 && rk < 1.0 &&
        !(w[k] <= c.c_omega_upper * std::pow(rk, c.alpha_prime) * (1.0 + 1e-12))) {
      note(rep.upper_bound_small_r, "omega <= C'_omega r^alpha' violated" + at.str());
    }
    const double mho_cap = c.iota == 0.0 ? c.c_mho : c.c_mho * std::pow(rk, c.iota);
    if (!(m[k] <= mho_cap * (1.0 + 1e-12) + 1e-15)) {
      note(rep.mho_bound, "mho <= C_mho r^iota violated" + at.str());
    }
    if (k == 0) continue;
    if (!(w[k] > w[k - 1])) note(rep.increasing, "omega not strictly increasing" + at.str());
    if (!(m[k] >= m[k - 1] - 1e-12 * std::max(1.0, m[k - 1]))) {
      note(rep.mho_nondecreasing, "mho decreasing" + at.str());
    }
    if (k + 1 < r.size()) {
      const double s0 = (w[k] - w[k - 1]) / (r[k] - r[k - 1]);
      const double s1 = (w[k + 1] - w[k]) / (r[k + 1] - r[k]);
      if (!(s1 - s0 >= -1e-10 * std::max({1.0, std::abs(s0), std::abs(s1)}))) {
        note(rep.convex, "omega not convex" + at.str());
      }
    }
  }
  return rep;
}

}  // namespace wavecascade
