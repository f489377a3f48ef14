#pragma once

// Explicit constants and growth exponents of the moment machinery.

#include <cstdint>

namespace deltachi {

// rho = sqrt(3)/pi - 1/3, the mean excess over 2 of max(1, |1+e^{i t}|^2).
double rho_closed_form();

struct RhoQuadrature {
  double value;
  double defect;  // value - closed form
};
// Composite Simpson of (1/2pi) * int_{-pi}^{pi} max(1, |1+e^{it}|^2) dt - 2,
// split at the kink t = +-2pi/3; `panels` panels per smooth piece (>= 64).
RhoQuadrature rho_by_quadrature(int panels);

// kappa(r) = (1/r) sum_{k<r} max(1, |1 + e^{2 pi i k / r}|^2), exact trig.
double kappa(int r);

struct ExponentParams {
  double y = 1.0;
  double rho = 0.0;
  double m = 0.0;        // max(3y - 1, (rho + 2) y)
  double n_exp = 0.0;    // max(y + 1, m)
  double kappa_r = 0.0;  // kappa at the supplied character order

  // second-moment (log x)-exponent: max{y-1, (rho+2)y-2, 3y-3} = n_exp - 2
  double upper_moment_exponent() const { return n_exp - 2.0; }
  // lower-bound exponents for the two character-pair cases
  double lower_exponent_distinct() const;  // max{y-1, 3y-3}
  double lower_exponent_equal() const;     // max{y-1, 5y-4}
};

ExponentParams exponent_params(double y, int r = 2);

// exp(sqrt(log log x * log log log x)); requires x >= 16.
double slack_factor(double x);
// exp(sqrt(log(1/sigma) * log log (1/sigma))); requires 0 < sigma <= 1/10.
double slack_factor_sigma(double sigma);

}  // namespace deltachi
