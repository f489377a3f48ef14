#include "deltachi/primes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace deltachi {

namespace {

void check_range(const FactorSieve& sieve, uint64_t x) {
  if (x < 2 || x > sieve.limit)
    throw std::invalid_argument("prime average: x outside sieve range");
}

}  // namespace

double prime_average(const FactorSieve& sieve, uint64_t x,
                     const DirichletCharacter& chi, double theta) {
  check_range(sieve, x);
  const double two_pi = 2.0 * std::numbers::pi;
  double sum = 0.0;
  uint64_t count = 0;
  for (uint64_t p = 2; p <= x; ++p) {
    if (sieve.spf[p] != p) continue;
    ++count;
    int32_t e = chi.exponent_at((int64_t)p);
    if (e == kChiZero) {
      sum += 1.0;  // |1 + 0|^2 = 1
      continue;
    }
    double phase = two_pi * e / chi.order() + theta * std::log((double)p);
    double v = 2.0 + 2.0 * std::cos(phase);
    sum += v > 1.0 ? v : 1.0;
  }
  return sum / (double)count;
}

std::complex<double> prime_twisted_average(const FactorSieve& sieve, uint64_t x,
                                           const DirichletCharacter& chi,
                                           double theta) {
  check_range(sieve, x);
  const double two_pi = 2.0 * std::numbers::pi;
  double re = 0.0, im = 0.0;
  uint64_t count = 0;
  for (uint64_t p = 2; p <= x; ++p) {
    if (sieve.spf[p] != p) continue;
    ++count;
    int32_t e = chi.exponent_at((int64_t)p);
    if (e == kChiZero) continue;
    double phase = two_pi * e / chi.order() + theta * std::log((double)p);
    re += std::cos(phase);
    im += std::sin(phase);
  }
  return {re / (double)count, im / (double)count};
}

}  // namespace deltachi
