#pragma once

// Prime-average equidistribution experiments.

#include <complex>

#include "deltachi/characters.hpp"
#include "deltachi/sieve.hpp"

namespace deltachi {

// (1/pi(x)) sum_{p <= x} max(1, |1 + chi(p) p^{i theta}|^2).
double prime_average(const FactorSieve& sieve, uint64_t x,
                     const DirichletCharacter& chi, double theta);

// (1/pi(x)) sum_{p <= x} chi(p) p^{i theta}.
std::complex<double> prime_twisted_average(const FactorSieve& sieve, uint64_t x,
                                           const DirichletCharacter& chi,
                                           double theta);

}  // namespace deltachi
