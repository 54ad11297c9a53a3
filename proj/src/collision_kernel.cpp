#include "wavecascade/collision_kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wavecascade/errors.hpp"

namespace wavecascade {

namespace {

constexpr double kPi = std::numbers::pi;

void require_nonnegative(double a, double b, double c, double d, const char* what) {
  if (!(a >= 0.0 && b >= 0.0 && c >= 0.0 && d >= 0.0)) {
    throw DomainError(std::string(what) + ": arguments must be nonnegative");
  }
}

}  // namespace

KernelWeights::KernelWeights(double c_q, double cutoff) : c_q_(c_q), cutoff_(cutoff) {
  if (!(c_q > 0.0) || !std::isfinite(c_q)) throw DomainError("KernelWeights: C_Q must be positive");
  if (!(cutoff > 1.0)) throw DomainError("KernelWeights: cut-off n must exceed 1");
}

double eight_term_expansion(double a, double b, double c, double d) {
  const double sum = -std::abs(a + b + c + d) + std::abs(a + b + c - d) + std::abs(a + b - c + d) +
                     std::abs(a - b + c + d) + std::abs(a - b - c - d) - std::abs(a - b + c - d) -
                     std::abs(a + b - c - d) - std::abs(a - b - c + d);
  return kPi / 16.0 * sum;
}

bool min_identity_holds(double r1, double r2, double r3, double r) {
  require_nonnegative(r1, r2, r3, r, "min_identity_holds");
  std::array<double, 4> v = {r1, r2, r3, r};
  std::sort(v.begin(), v.end());
  if (v[0] == 0.0) return true;
  return v[0] + v[3] <= (v[1] + v[2]) * (1.0 + 1e-14);
}

double min_identity(double r1, double r2, double r3, double r) {
  require_nonnegative(r1, r2, r3, r, "min_identity");
  if (!min_identity_holds(r1, r2, r3, r)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "min_identity: (" << r1 << ", " << r2 << ", " << r3 << ", " << r
        << ") has max + min above the sum of the middle two; the sine integral is "
        << eight_term_expansion(r1, r2, r3, r) << ", not (pi/4) min";
    throw DomainError(msg.str());
  }
  const double closed = kPi / 4.0 * std::min({r1, r2, r3, r});
  const double expanded = eight_term_expansion(r1, r2, r3, r);
  const double scale = std::max(1.0, r1 + r2 + r3 + r);
  if (std::abs(closed - expanded) > 1e-12 * scale) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "min_identity: closed form " << closed << " disagrees with eight-term sum " << expanded;
    throw NumericError(msg.str());
  }
  return closed;
}

SineIntegralResult sine_integral_oracle(double r1, double r2, double r3, double r, double tail_cut,
                                        double rel_tol) {
  require_nonnegative(r1, r2, r3, r, "sine_integral_oracle");
  if (!(tail_cut >= 100.0)) throw DomainError("sine_integral_oracle: tail_cut must be >= 100");

  SineIntegralResult out;
  out.error_estimate = 1.0 / tail_cut;
  if (r1 == 0.0 || r2 == 0.0 || r3 == 0.0 || r == 0.0) return out;

  auto integrand = [=](double x) {
    return std::sin(r1 * x) * std::sin(r2 * x) * std::sin(r3 * x) * std::sin(r * x) / (x * x);
  };

  // Near 0 the product is r1 r2 r3 r x^4 + O(x^6), so the [0, eps] piece is
  // r1 r2 r3 r eps^3 / 3.
  constexpr double eps = 1e-8;
  double value = r1 * r2 * r3 * r * eps * eps * eps / 3.0;

  // One period of the fastest combination frequency per panel.
  const double fastest = std::max(1.0, r1 + r2 + r3 + r);
  const double width = 2.0 * kPi / fastest;
  const auto panels = static_cast<int>(std::ceil((tail_cut - eps) / width));
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

  double err_sum = 0.0;
  double worst_err = 0.0, worst_at = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = eps + p * width;
    const double b = std::min(tail_cut, a + width);
    double abs_err = 0.0;
    value += GK::integrate(integrand, a, b, 12, rel_tol, &abs_err);
    err_sum += abs_err;
    if (abs_err > worst_err) {
      worst_err = abs_err;
      worst_at = a;
    }
  }
  if (err_sum > 1e-6) {
    std::ostringstream msg;
    msg << "sine_integral_oracle: quadrature error estimate " << err_sum
        << " exceeds 1e-6; worst panel starts at x=" << worst_at << " (error " << worst_err << ")";
    throw NumericError(msg.str());
  }
  out.value = value;
  out.error_estimate += err_sum;
  out.panels = panels;
  return out;
}

double xi_weight(const DispersionRelation& d, double w, double w1, double w2, double w3) {
  const double r = d.invert(w);
  const double r1 = d.invert(w1);
  const double r2 = d.invert(w2);
  const double r3 = d.invert(w3);
  return d.mho(r) * d.mho(r1) * d.mho(r2) * d.mho(r3) * std::min({r1, r2, r3, r});
}

double cutoff_kernel_from_radii(const KernelWeights& kw, double r, double r1, double r2, double r3,
                                double mho3) {
  if (r == 0.0 || r1 == 0.0 || r2 == 0.0 || r3 == 0.0) return 0.0;
  if (!kw.admits_radius(r) || !kw.admits_radius(r1) || !kw.admits_radius(r2)) return 0.0;
  const double m = std::min({r1, r2, r3, r, kw.cutoff()});
  return mho3 * m / (r * r1 * r2);
}

double cutoff_kernel(const KernelWeights& kw, const DispersionRelation& d, double w, double w1,
                     double w2) {
  if (w + w1 < w2) return 0.0;
  const double w3 = w + w1 - w2;
  const double r3 = d.invert(w3);
  return cutoff_kernel_from_radii(kw, d.invert(w), d.invert(w1), d.invert(w2), r3, d.mho(r3));
}

}  // namespace wavecascade
