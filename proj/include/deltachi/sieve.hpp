#pragma once

// Smallest-prime-factor sieve and per-integer multiplicative data.

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace deltachi {

struct FactorSieve {
  uint32_t limit = 0;
  std::vector<uint32_t> spf;  // spf[n] for n in [0, limit]; spf[0]=0, spf[1]=1

  bool is_prime(uint32_t n) const { return n >= 2 && spf[n] == n; }
};

// Eratosthenes-style construction; throws on limit < 2 or when the table
// would exceed max_bytes.
FactorSieve build_sieve(uint32_t limit,
                        uint64_t max_bytes = (uint64_t)1 << 31);

struct FactoredInteger {
  uint64_t n = 1;
  std::vector<std::pair<uint32_t, uint32_t>> factors;  // (prime, exponent), ascending
  std::vector<uint64_t> divisors;                      // sorted ascending
  std::vector<double> log_divisors;                    // natural logs, increasing
  bool squarefree = true;                              // mu^2(n) = 1
  uint32_t omega = 0;                                  // distinct prime count
  uint64_t tau3 = 1;                                   // prod (e+1)(e+2)/2

  size_t tau() const { return divisors.size(); }
};

FactoredInteger factorize(const FactorSieve& sieve, uint64_t n);

// n * p for a prime p not dividing n; no sieve needed.
FactoredInteger multiply_by_prime(const FactoredInteger& fi, uint64_t p);

struct DivisorGaps {
  double min_log_gap;  // min over consecutive divisors of log(d'/d); +inf for n=1
  double clamped;      // min(1, min_log_gap)
};
DivisorGaps divisor_gaps(const FactoredInteger& fi);

struct WeightSpec {
  double y = 1.0;
  uint64_t coprime_to = 1;     // weight vanishes unless gcd(n, coprime_to) = 1
  bool squarefree_only = true;
};

// y^omega(n) under the gates above, else 0.
double weight(const WeightSpec& ws, const FactoredInteger& fi);

}  // namespace deltachi
