#include "deltachi/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace deltachi {

FactorSieve build_sieve(uint32_t limit, uint64_t max_bytes) {
  if (limit < 2) throw std::invalid_argument("build_sieve: limit must be >= 2");
  uint64_t bytes = ((uint64_t)limit + 1) * sizeof(uint32_t);
  if (bytes > max_bytes)
    throw std::runtime_error("build_sieve: table of " + std::to_string(bytes) +
                             " bytes exceeds budget of " +
                             std::to_string(max_bytes));
  FactorSieve s;
  s.limit = limit;
  s.spf.resize((size_t)limit + 1);
  std::iota(s.spf.begin(), s.spf.end(), 0u);
  for (uint64_t p = 2; p * p <= limit; ++p) {
    if (s.spf[p] != p) continue;
    for (uint64_t m = p * p; m <= limit; m += p)
      if (s.spf[m] == m) s.spf[m] = (uint32_t)p;
  }
  return s;
}

namespace {

void finish_factored(FactoredInteger& fi) {
  fi.omega = (uint32_t)fi.factors.size();
  fi.squarefree = true;
  fi.tau3 = 1;
  size_t ndiv = 1;
  for (auto [p, e] : fi.factors) {
    (void)p;
    if (e > 1) fi.squarefree = false;
    fi.tau3 *= (uint64_t)(e + 1) * (e + 2) / 2;
    ndiv *= e + 1;
  }
  fi.divisors.clear();
  fi.divisors.reserve(ndiv);
  fi.divisors.push_back(1);
  for (auto [p, e] : fi.factors) {
    size_t cur = fi.divisors.size();
    uint64_t pk = 1;
    for (uint32_t k = 1; k <= e; ++k) {
      pk *= p;
      for (size_t i = 0; i < cur; ++i) fi.divisors.push_back(fi.divisors[i] * pk);
    }
  }
  std::sort(fi.divisors.begin(), fi.divisors.end());
  fi.log_divisors.resize(fi.divisors.size());
  for (size_t i = 0; i < fi.divisors.size(); ++i)
    fi.log_divisors[i] = std::log((double)fi.divisors[i]);
}

}  // namespace

FactoredInteger factorize(const FactorSieve& sieve, uint64_t n) {
  if (n == 0 || n > sieve.limit)
    throw std::invalid_argument("factorize: n=" + std::to_string(n) +
                                " outside [1, " + std::to_string(sieve.limit) + "]");
  FactoredInteger fi;
  fi.n = n;
  uint64_t m = n;
  while (m > 1) {
    uint32_t p = sieve.spf[m];
    uint32_t e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    fi.factors.emplace_back(p, e);
  }
  std::sort(fi.factors.begin(), fi.factors.end());
  finish_factored(fi);
  return fi;
}

FactoredInteger multiply_by_prime(const FactoredInteger& fi, uint64_t p) {
  if (fi.n % p == 0)
    throw std::invalid_argument("multiply_by_prime: p divides n");
  FactoredInteger out;
  out.n = fi.n * p;
  out.factors = fi.factors;
  out.factors.emplace_back((uint32_t)p, 1);
  std::sort(out.factors.begin(), out.factors.end());
  finish_factored(out);
  return out;
}

DivisorGaps divisor_gaps(const FactoredInteger& fi) {
  DivisorGaps g{std::numeric_limits<double>::infinity(), 1.0};
  for (size_t i = 1; i < fi.log_divisors.size(); ++i)
    g.min_log_gap = std::min(g.min_log_gap, fi.log_divisors[i] - fi.log_divisors[i - 1]);
  g.clamped = std::min(1.0, g.min_log_gap);
  return g;
}

double weight(const WeightSpec& ws, const FactoredInteger& fi) {
  if (ws.squarefree_only && !fi.squarefree) return 0.0;
  if (ws.coprime_to > 1 && std::gcd(fi.n, ws.coprime_to) != 1) return 0.0;
  double w = 1.0;
  for (uint32_t i = 0; i < fi.omega; ++i) w *= ws.y;
  return w;
}

}  // namespace deltachi
