#pragma once

// Exact evaluation and exact supremum computation of windowed, character-
// twisted divisor sums (Hooley Delta functions and their two-window and
// polynomially weighted variants), with brute-force oracles.
//
// A window in log scale is (u, u+v] with v <= 1.  The achievable window
// contents are exactly: the empty set, and contiguous runs of divisors (in
// sorted log order) whose log-span is < 1.  All suprema here reduce to finite
// maxima over such runs.

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "deltachi/characters.hpp"
#include "deltachi/sieve.hpp"

namespace deltachi {

struct WindowRun {
  int lo = -1, hi = -1;  // inclusive divisor ranks; lo < 0 means empty window
  bool empty() const { return lo < 0; }
  friend bool operator==(const WindowRun&, const WindowRun&) = default;
};

struct SupResult {
  double value = 0.0;
  std::array<double, 2> arg_u{0.0, 0.0};
  std::array<double, 2> arg_v{1.0, 1.0};
  WindowRun run1, run2;
};

// Ranks {lo..hi} of divisors with u < log d <= u+v; lo > hi when empty.
std::pair<int, int> window_ranks(std::span<const double> logs, double u, double v);

// All contiguous runs with log-span < 1, in lexicographic (lo, hi) order.
std::vector<WindowRun> unit_window_runs(std::span<const double> logs);

// A reproducible (u, v) interior point whose window content is exactly `run`.
std::pair<double, double> run_witness(std::span<const double> logs,
                                      const WindowRun& run);

// tau(n) x tau(n) grid of chi1(d_i) chi2(d_j) [d_i d_j | n] with complex 2D
// prefix sums for O(1) rectangle queries.  Owns a copy of the factorization.
class DivisorPairTable {
 public:
  DivisorPairTable(FactoredInteger fi, const DirichletCharacter& chi1,
                   const DirichletCharacter& chi2);

  const FactoredInteger& fi() const { return fi_; }
  int tau() const { return tau_; }
  bool pair_divides(int i, int j) const { return div_[(size_t)i * tau_ + j] != 0; }
  std::complex<double> entry(int i, int j) const {
    return pair_divides(i, j) ? w1_[i] * w2_[j] : std::complex<double>{};
  }
  std::complex<double> chi1_value(int i) const { return w1_[i]; }
  std::complex<double> chi2_value(int j) const { return w2_[j]; }

  // Inclusive rank rectangle sum; empty ranges (i1 > i2) give 0.
  std::complex<double> rect_sum(int i1, int i2, int j1, int j2) const;

 private:
  FactoredInteger fi_;
  int tau_;
  std::vector<std::complex<double>> w1_, w2_;
  std::vector<uint8_t> div_;
  std::vector<std::complex<double>> prefix_;  // (tau+1)^2, inclusive
};

// Two-window twisted sum at explicit (u, v), one rectangle query.
std::complex<double> delta3_window_sum(const DivisorPairTable& table,
                                       std::array<double, 2> u,
                                       std::array<double, 2> v);

// Exact sup over u in R^2, v in [0,1]^2 of |delta3_window_sum|, by run-pair
// enumeration.  Ties broken lexicographically on (run1.lo, run1.hi,
// run2.lo, run2.hi).
SupResult delta3_sup(const DivisorPairTable& table);
SupResult delta3_sup(const FactoredInteger& fi, const DirichletCharacter& chi1,
                     const DirichletCharacter& chi2);

struct BruteForceOptions {
  bool grid_check = true;  // also verify a dense (u,v) grid never beats the sup
  int u_samples = 18;
  int v_samples = 4;
};

// Independent oracle: same contract as delta3_sup but with direct per-pair
// summation (no prefix sums).  Requires tau(n) <= 96.
SupResult delta3_sup_bruteforce(const FactoredInteger& fi,
                                const DirichletCharacter& chi1,
                                const DirichletCharacter& chi2,
                                const BruteForceOptions& opts = {});

// ---- one-window variants ----

struct SupResult1D {
  double value = 0.0;
  double arg_u = 0.0, arg_v = 1.0;
  WindowRun run;
};

SupResult1D delta_sup(std::span<const uint64_t> divisors,
                      const DirichletCharacter& chi);
SupResult1D delta_sup(const FactoredInteger& fi, const DirichletCharacter& chi);

// max over d | n of delta_sup(d, chi).value
double delta_sup_over_divisors(const FactoredInteger& fi,
                               const DirichletCharacter& chi);

// ---- twisted divisor sums ----

// sum_{d|n} chi(d) d^{i theta}
std::complex<double> twisted_divisor_sum(const FactoredInteger& fi,
                                         const DirichletCharacter& chi,
                                         double theta);
std::complex<double> twisted_divisor_sum(std::span<const uint64_t> divisors,
                                         const DirichletCharacter& chi,
                                         double theta);

// sum_{d1 d2 | n} chi1(d1) d1^{i theta1} chi2(d2) d2^{i theta2}
std::complex<double> twisted_pair_sum(const FactoredInteger& fi,
                                      const DirichletCharacter& chi1,
                                      const DirichletCharacter& chi2,
                                      double theta1, double theta2);

// ---- polynomially weighted window sums ----
// delta_k(u, v1, v2) = sum_{d1 d2 | n, u < log d1 <= u+v1}
//     chi1(d1) chi2(d2) d2^{i theta} (u + v1 - v2 - log d1)^k

inline constexpr int kMaxPolyDegree = 64;

// c_i = chi1(d_i) * sum_{j : d_i d_j | n} chi2(d_j) d_j^{i theta}; the window
// sum is then sum_{i in window} c_i (w - log d_i)^k with w = u + v1 - v2.
std::vector<std::complex<double>> poly_window_coefficients(
    const FactoredInteger& fi, const DirichletCharacter& chi1,
    const DirichletCharacter& chi2, double theta);

std::complex<double> delta_k_window_sum(const FactoredInteger& fi,
                                        const DirichletCharacter& chi1,
                                        const DirichletCharacter& chi2,
                                        double theta, int k, double u,
                                        double v1, double v2);

struct DeltaKSup {
  double value = 0.0;
  double u = 0.0, v1 = 1.0, v2 = 0.0;  // witness parameters
  double w = 0.0;                      // u + v1 - v2 at the witness
  WindowRun run;
};

// sup over (u, v1, v2) in R x [0,1]^2.  With w = u + v1 - v2, each run
// contributes |P(w)|, P(w) = sum_i c_i (w - log d_i)^k, on a w-interval;
// maximised by derivative sign-bisection plus endpoints.
DeltaKSup delta_k_sup(const FactoredInteger& fi, const DirichletCharacter& chi1,
                      const DirichletCharacter& chi2, double theta, int k);

// Dense-w fallback for audits: per-run grid of step w_step.
double delta_k_sup_grid(const FactoredInteger& fi, const DirichletCharacter& chi1,
                        const DirichletCharacter& chi2, double theta, int k,
                        double w_step);

// ---- one-prime extension identity ----

struct RecurrenceDefect {
  double shifted = 0.0;  // third term evaluated at (u1, u2 - log p)
  double literal = 0.0;  // third term evaluated at (u1, u2)
  uint64_t points = 0;
};

// Compares delta3 on n*p against the three-term expansion over n at sampled
// (u, v) points plus breakpoint-adjacent points.  gcd(n, p) = 1 required.
RecurrenceDefect recurrence_defect(const FactoredInteger& fi,
                                   uint64_t p,
                                   const DirichletCharacter& chi1,
                                   const DirichletCharacter& chi2,
                                   int samples, uint64_t seed);

}  // namespace deltachi
