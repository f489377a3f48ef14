#pragma once

// Moment integrals of the windowed twisted divisor sums: exact u-integrals,
// sup functionals over window parameters, L^{2q} moments, and Cauchy-weighted
// second moments of the twisted divisor sums.

#include <array>
#include <span>

#include "deltachi/delta.hpp"
#include "deltachi/quadrature.hpp"

namespace deltachi {

// Exact: int_R |delta3(u1, u2, v)|^2 du1 for fixed u2, v (piecewise constant
// in u1; breakpoints at log d - v1 and log d).
double integral_sq_u1(const DivisorPairTable& table, double u2,
                      std::array<double, 2> v);

// Exact: int_R |delta3(u - u1, u1, v)|^2 du1 (antidiagonal slice).
double integral_sq_diag(const DivisorPairTable& table, double u,
                        std::array<double, 2> v);

// sup over (u2, v) in R x [0,1]^2 of integral_sq_u1: the second-window
// content ranges over unit runs; for fixed content the integral is piecewise
// affine in v1, so the sup is attained at v1 in {0,1} or a log-ratio.
double sup_integral_sq_axis1(const DivisorPairTable& table);

// sup over (u, v) of integral_sq_diag; candidates: v components in {0,1} or
// log-ratios, u at divisor logs minus {0, v1, v2, v1+v2}.
double sup_integral_sq_diag(const DivisorPairTable& table);

// Coarse grid searches for cross-checking the candidate enumerations.
double sup_integral_sq_axis1_grid(const DivisorPairTable& table, int grid);
double sup_integral_sq_diag_grid(const DivisorPairTable& table, int grid);

// M_{2q}: int over [0,1]^2 x R^2 of |delta3(u, v)|^{2q}.  u-integrals exact
// via the 2D cell arrangement; v-integrals by composite Simpson split at the
// log-ratio kinks (the integrand is bilinear between kinks, so the split
// scheme is exact).  Scheme simpson_plain uses a uniform v-grid instead.
double moment_2q(const DivisorPairTable& table, int q,
                 const QuadratureSpec& quad = {});

// One-window M_{2q} for an explicit divisor list (exact: u piecewise
// constant, v piecewise affine split at crossings).
double moment_2q_1d(std::span<const uint64_t> divisors,
                    const DirichletCharacter& chi, int q);

// sum over d | n of moment_2q_1d(divisors(d)).
double moment_2q_1d_over_divisors(const FactoredInteger& fi,
                                  const DirichletCharacter& chi, int q);

// M^{(k)}_{2q}: int over [0,1]^2 x R of |delta_k(u, v1, v2)|^{2q} du dv1 dv2.
// Exact: Gauss rules at every level (the integrand is piecewise polynomial).
double moment_2q_poly(const FactoredInteger& fi, const DirichletCharacter& chi1,
                      const DirichletCharacter& chi2, double theta, int k, int q);

struct WeightedMoment {
  double value = 0.0;
  double tail_bound = 0.0;  // rigorous bound on the discarded |theta| > cutoff mass
};

// int_R |tau(n, chi, t, theta)|^2 dt/(1+t^2), first slot integrated.
WeightedMoment cauchy_moment_pair(const FactoredInteger& fi,
                                  const DirichletCharacter& chi1,
                                  const DirichletCharacter& chi2, double theta,
                                  const QuadratureSpec& quad = {});

// int int |tau(n, chi, t1, t2)|^2 dt1 dt2 / ((1+t1^2)(1+t2^2)).
WeightedMoment cauchy_moment_pair2(const FactoredInteger& fi,
                                   const DirichletCharacter& chi1,
                                   const DirichletCharacter& chi2,
                                   const QuadratureSpec& quad = {});

// ( sum_{d|n} ( int |tau(d, chi, t)|^2 dt/(1+t^2) )^q )^{1/q}.
WeightedMoment cauchy_moment_divisors(const FactoredInteger& fi,
                                      const DirichletCharacter& chi, int q,
                                      const QuadratureSpec& quad = {});

}  // namespace deltachi
