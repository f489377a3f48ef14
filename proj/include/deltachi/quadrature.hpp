#pragma once

// Deterministic quadrature building blocks: composite Simpson with explicit
// breakpoint splitting, small Gauss-Legendre rules, and the sine-integral
// helpers used for analytic tail corrections of Cauchy-type integrals.

#include <functional>
#include <span>
#include <vector>

namespace deltachi {

struct QuadratureSpec {
  double theta_cutoff = 200.0;  // tail truncation for integrals over R
  int panels = 512;             // composite-rule density knob
  enum class Scheme { simpson_split, simpson_plain } scheme = Scheme::simpson_split;
  int mc_samples = 0;           // Monte Carlo cross-check budget (used by tests)
};

// Composite Simpson on [a, b] with n panels (n rounded up to even).
double simpson(const std::function<double(double)>& f, double a, double b, int n);

// Simpson split at interior breakpoints (sorted or not; clipped to (a,b)),
// `panels` panels per smooth piece.
double simpson_split(const std::function<double(double)>& f, double a, double b,
                     std::span<const double> breakpoints, int panels);

// Sine integral Si(x) = int_0^x sin(t)/t dt; power series for |x| <= 16,
// 4-term asymptotic beyond.
double sine_integral(double x);

// int_cutoff^inf cos(a t) / t^2 dt  (cutoff > 0).
double tail_cos_over_sq(double cutoff, double a);

// Nodes/weights of the 8-point Gauss-Legendre rule on [-1, 1].
std::span<const double> gauss8_nodes();
std::span<const double> gauss8_weights();

// Gauss-Legendre with ceil((deg+1)/2) points, exact for polynomials of the
// given degree; supported up to degree 23.
void gauss_rule_for_degree(int degree, std::vector<double>& nodes,
                           std::vector<double>& weights);

}  // namespace deltachi
