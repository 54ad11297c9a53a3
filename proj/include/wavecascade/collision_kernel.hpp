#pragma once

#include <limits>
#include <numbers>

#include "wavecascade/dispersion.hpp"

namespace wavecascade {

// Constant in front of the radial collision integral and the cut-off level n
// of the bounded kernel K_n (infinity means no cut-off).
class KernelWeights {
 public:
  static constexpr double kDefaultCq = 8.0 * std::numbers::pi * std::numbers::pi;

  explicit KernelWeights(double c_q = kDefaultCq,
                         double cutoff = std::numeric_limits<double>::infinity());

  double c_q() const { return c_q_; }
  double cutoff() const { return cutoff_; }
  bool has_cutoff() const { return cutoff_ < std::numeric_limits<double>::infinity(); }
  // chi_[1/n, n)(r); always 1 without a cut-off.
  bool admits_radius(double r) const { return !has_cutoff() || (r >= 1.0 / cutoff_ && r < cutoff_); }

 private:
  double c_q_;
  double cutoff_;
};

// Closed form of int_0^inf sin(r1 x) sin(r2 x) sin(r3 x) sin(r x) / x^2 dx,
// valid for all nonnegative arguments:
// (pi/16)[-|a+b+c+d| + |a+b+c-d| + |a+b-c+d| + |a-b+c+d| + |a-b-c-d|
//         -|a-b+c-d| - |a+b-c-d| - |a-b-c+d|]
double eight_term_expansion(double r1, double r2, double r3, double r);

// True when the sine integral reduces to (pi/4) min: with the radii sorted
// a <= b <= c <= d, either a = 0 or a + d <= b + c. Every quadruple that is
// resonant for a convex increasing dispersion (w(a) + w(d) = w(b) + w(c))
// satisfies this.
bool min_identity_holds(double r1, double r2, double r3, double r);

// (pi/4) min{r1, r2, r3, r}. DomainError where min_identity_holds is false;
// otherwise cross-checks against the eight-term form and throws NumericError
// if they disagree beyond 1e-12 (scaled).
double min_identity(double r1, double r2, double r3, double r);

struct SineIntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;  // quadrature estimate + 1/tail_cut tail bound
  int panels = 0;
};

// int_0^inf sin(r1 x) sin(r2 x) sin(r3 x) sin(r x) / x^2 dx by adaptive
// Gauss-Kronrod over [eps, tail_cut]; [0, eps] uses the x^2 Taylor term.
// tail_cut must be >= 100. rel_tol applies per panel.
SineIntegralResult sine_integral_oracle(double r1, double r2, double r3, double r,
                                        double tail_cut = 1e4, double rel_tol = 1e-10);

// Xi(w, w1, w2, w3) = mho mho1 mho2 mho3 min{|k1|,|k2|,|k3|,|k|}.
double xi_weight(const DispersionRelation& d, double w, double w1, double w2, double w3);

// K_n(w, w1, w2): zero unless w + w1 >= w2; otherwise with w3 = w + w1 - w2
//   mho(r3) min{r1, r2, r3, r, n} chi(r) chi(r1) chi(r2) / (r r1 r2).
// Does not include C_Q.
double cutoff_kernel(const KernelWeights& kw, const DispersionRelation& d, double w, double w1,
                     double w2);

// Same kernel from precomputed radii; mho3 = mho(r3). Used by the table
// builder so that nodes are not inverted repeatedly.
double cutoff_kernel_from_radii(const KernelWeights& kw, double r, double r1, double r2, double r3,
                                double mho3);

}  // namespace wavecascade
