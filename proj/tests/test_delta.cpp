#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <complex>
#include <numeric>
#include <tuple>

#include "deltachi/delta.hpp"

using namespace deltachi;
using cplx = std::complex<double>;

namespace {

FactorSieve& sieve() {
  static FactorSieve s = build_sieve(1 << 20);
  return s;
}

DirichletCharacter triv() { return character_mod(1, 0); }

}  // namespace

TEST_CASE("window ranks and runs") {
  auto fi = factorize(sieve(), 6);  // logs 0, log2, log3, log6
  auto [a, b] = window_ranks(fi.log_divisors, -0.5, 1.0);
  CHECK(a == 0);
  CHECK(b == 0);
  std::tie(a, b) = window_ranks(fi.log_divisors, -0.1, 1.0);
  CHECK(a == 0);
  CHECK(b == 1);
  std::tie(a, b) = window_ranks(fi.log_divisors, 10.0, 1.0);
  CHECK(a > b);  // empty

  auto runs = unit_window_runs(fi.log_divisors);
  // {1},{1,2},{2},{2,3},{3},{3,6},{6}: span(1..3)=log3 >= 1 excluded
  CHECK(runs.size() == 7);
  CHECK(runs[0] == WindowRun{0, 0});
  CHECK(runs[1] == WindowRun{0, 1});
  CHECK(runs[2] == WindowRun{1, 1});
  CHECK(runs[3] == WindowRun{1, 2});
}

TEST_CASE("pair table entries and rectangle sums") {
  auto fi = factorize(sieve(), 6);
  DivisorPairTable t(fi, triv(), triv());
  CHECK(t.entry(0, 0) == cplx{1.0, 0.0});
  CHECK(t.entry(1, 1) == cplx{0.0, 0.0});  // 2*2 does not divide 6
  CHECK(t.entry(1, 2) == cplx{1.0, 0.0});  // 2*3 divides 6
  // random rectangles vs direct sums
  for (int i1 = 0; i1 < t.tau(); ++i1)
    for (int i2 = i1; i2 < t.tau(); ++i2)
      for (int j1 = 0; j1 < t.tau(); ++j1)
        for (int j2 = j1; j2 < t.tau(); ++j2) {
          cplx direct{};
          for (int i = i1; i <= i2; ++i)
            for (int j = j1; j <= j2; ++j) direct += t.entry(i, j);
          CHECK(std::abs(t.rect_sum(i1, i2, j1, j2) - direct) < 1e-12);
        }
  // full-grid sum equals the pair count for the trivial pair
  CHECK(t.rect_sum(0, t.tau() - 1, 0, t.tau() - 1).real() ==
        doctest::Approx((double)fi.tau3));
}

TEST_CASE("delta3 window sums at explicit points") {
  auto chi3 = character_mod(3, 1);
  auto f1 = factorize(sieve(), 1);
  DivisorPairTable t1(f1, chi3, chi3);
  CHECK(std::abs(delta3_window_sum(t1, {-0.5, -0.5}, {1, 1}) - cplx{1, 0}) < 1e-15);

  auto f2 = factorize(sieve(), 2);
  DivisorPairTable t2(f2, chi3, chi3);
  CHECK(std::abs(delta3_window_sum(t2, {-0.1, -0.1}, {1, 1}) - cplx{-1, 0}) < 1e-12);

  auto f30 = factorize(sieve(), 30);
  DivisorPairTable t30(f30, chi3, chi3);
  CHECK(std::abs(delta3_window_sum(t30, {std::log(30.0) + 1.0, 0.0}, {1, 1})) == 0.0);
}

TEST_CASE("delta3 sup: classic and twisted anchors") {
  CHECK(delta3_sup(factorize(sieve(), 1), triv(), triv()).value ==
        doctest::Approx(1.0));
  auto r6 = delta3_sup(factorize(sieve(), 6), triv(), triv());
  CHECK(r6.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r6.run1 == WindowRun{0, 1});
  CHECK(r6.run2 == WindowRun{0, 1});

  auto chi3 = character_mod(3, 1);
  CHECK(delta3_sup(factorize(sieve(), 2), chi3, chi3).value ==
        doctest::Approx(1.0).epsilon(1e-12));

  // frozen values for the (3:1, 5:1) pair (independent brute-force oracle)
  auto chi5 = character_mod(5, 1);
  auto val = [&](uint64_t n) {
    return delta3_sup(factorize(sieve(), n), chi3, chi5).value;
  };
  CHECK(val(7) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(val(14) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(val(77) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(val(154) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  CHECK(val(1001) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(val(2002) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-12));
}

TEST_CASE("witness reproduces the sup value") {
  auto chi3 = character_mod(3, 1);
  auto chi5 = character_mod(5, 1);
  for (uint64_t n : {1ull, 2ull, 6ull, 14ull, 30ull, 154ull, 2002ull, 30030ull}) {
    auto fi = factorize(sieve(), n);
    DivisorPairTable t(fi, chi3, chi5);
    auto r = delta3_sup(t);
    CHECK(std::abs(std::abs(delta3_window_sum(t, r.arg_u, r.arg_v)) - r.value) <
          1e-9);
  }
}

TEST_CASE("brute-force oracle agrees with the prefix-sum method") {
  auto chi3 = character_mod(3, 1);
  auto chi5 = character_mod(5, 1);
  for (uint64_t n = 1; n <= 400; ++n) {
    auto fi = factorize(sieve(), n);
    if (!fi.squarefree || std::gcd(n, 15ull) != 1) continue;
    auto a = delta3_sup(fi, chi3, chi5);
    auto b = delta3_sup_bruteforce(fi, chi3, chi5);
    CHECK(std::abs(a.value - b.value) < 1e-9);
    CHECK(a.run1 == b.run1);
    CHECK(a.run2 == b.run2);
  }
}

TEST_CASE("brute-force guard") {
  auto fi = factorize(sieve(), 720720);  // tau = 240
  CHECK(fi.tau() > 96);
  CHECK_THROWS_AS(delta3_sup_bruteforce(fi, triv(), triv()), std::domain_error);
}

TEST_CASE("domination chain") {
  auto chi3 = character_mod(3, 1);
  auto chi5 = character_mod(5, 1);
  for (uint64_t n = 1; n <= 300; ++n) {
    auto fi = factorize(sieve(), n);
    double twisted = delta3_sup(fi, chi3, chi5).value;
    double plain = delta3_sup(fi, triv(), triv()).value;
    CHECK(twisted >= 1.0 - 1e-12);
    CHECK(twisted <= plain + 1e-9);
    CHECK(plain <= (double)fi.tau3 + 1e-9);
  }
}

TEST_CASE("one-window sup") {
  auto chi3 = character_mod(3, 1);
  auto f6 = factorize(sieve(), 6);
  auto r = delta_sup(f6, triv());
  CHECK(r.value == doctest::Approx(2.0));
  CHECK(r.run == WindowRun{0, 1});  // lex-first among the ties

  CHECK(delta_sup(factorize(sieve(), 1), chi3).value == doctest::Approx(1.0));
  CHECK(delta_sup(factorize(sieve(), 2), chi3).value == doctest::Approx(1.0));

  // 1-D domination + sup over divisors
  auto chi7 = character_mod(7, 1);
  for (uint64_t n = 1; n <= 300; ++n) {
    auto fi = factorize(sieve(), n);
    double d = delta_sup(fi, chi7).value;
    double dp = delta_sup(fi, triv()).value;
    double ds = delta_sup_over_divisors(fi, chi7);
    CHECK(d >= 1.0 - 1e-12);
    CHECK(d <= dp + 1e-9);
    CHECK(dp <= (double)fi.tau() + 1e-9);
    CHECK(ds >= d - 1e-12);
  }
  CHECK(delta_sup_over_divisors(factorize(sieve(), 6), chi3) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(delta_sup_over_divisors(factorize(sieve(), 1), chi3) ==
        doctest::Approx(1.0));
}

TEST_CASE("twisted divisor sums") {
  auto chi3 = character_mod(3, 1);
  CHECK(std::abs(twisted_divisor_sum(factorize(sieve(), 1), chi3, 0.3) -
                 cplx{1, 0}) < 1e-15);
  auto f7 = factorize(sieve(), 7);
  CHECK(std::abs(twisted_divisor_sum(f7, chi3, 0.0) -
                 (cplx{1, 0} + chi3.eval(7))) < 1e-12);
  // multiplicative on coprime parts
  for (double theta : {0.0, 0.7, 2.3}) {
    auto lhs = twisted_divisor_sum(factorize(sieve(), 6), chi3, theta);
    auto rhs = twisted_divisor_sum(factorize(sieve(), 2), chi3, theta) *
               twisted_divisor_sum(factorize(sieve(), 3), chi3, theta);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
  // phase covariance: tau(n, chi, -t) = conj(tau(n, conj(chi), t))
  auto chi5 = character_mod(5, 1);
  for (uint64_t n : {14ull, 77ull, 154ull})
    for (double t : {0.4, 1.7}) {
      auto a = twisted_divisor_sum(factorize(sieve(), n), chi5, -t);
      auto b = std::conj(
          twisted_divisor_sum(factorize(sieve(), n), conjugate(chi5), t));
      CHECK(std::abs(a - b) < 1e-12);
    }
}

TEST_CASE("twisted pair sums") {
  auto chi3 = character_mod(3, 1);
  auto chi5 = character_mod(5, 1);
  CHECK(std::abs(twisted_pair_sum(factorize(sieve(), 1), chi3, chi5, 0.1, 0.2) -
                 cplx{1, 0}) < 1e-15);
  auto f7 = factorize(sieve(), 7);
  CHECK(std::abs(twisted_pair_sum(f7, chi3, chi5, 0.0, 0.0) -
                 (cplx{1, 0} + chi3.eval(7) + chi5.eval(7))) < 1e-12);
  // multiplicative on coprime parts
  for (double t1 : {0.0, 0.9})
    for (double t2 : {0.0, 1.3}) {
      auto lhs = twisted_pair_sum(factorize(sieve(), 14), chi3, chi5, t1, t2);
      auto rhs = twisted_pair_sum(factorize(sieve(), 2), chi3, chi5, t1, t2) *
                 twisted_pair_sum(factorize(sieve(), 7), chi3, chi5, t1, t2);
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
  // theta = 0 equals the full-grid sum
  auto f30 = factorize(sieve(), 154);
  DivisorPairTable t(f30, chi3, chi5);
  CHECK(std::abs(twisted_pair_sum(f30, chi3, chi5, 0.0, 0.0) -
                 t.rect_sum(0, t.tau() - 1, 0, t.tau() - 1)) < 1e-10);
}

TEST_CASE("delta_k at explicit points matches a naive sum") {
  auto chi3 = character_mod(3, 1);
  auto chi5 = character_mod(5, 1);
  auto fi = factorize(sieve(), 14);
  double theta = 0.6;
  for (int k : {0, 1, 3}) {
    for (double u : {-0.4, 0.1, 1.2})
      for (double v1 : {0.3, 1.0})
        for (double v2 : {0.0, 0.8}) {
          cplx naive{};
          for (size_t i = 0; i < fi.tau(); ++i) {
            double ld = fi.log_divisors[i];
            if (!(u < ld && ld <= u + v1)) continue;
            uint64_t m = fi.n / fi.divisors[i];
            for (size_t j = 0; j < fi.tau(); ++j) {
              if (m % fi.divisors[j]) continue;
              double lj = fi.log_divisors[j];
              cplx ph{std::cos(theta * lj), std::sin(theta * lj)};
              double w = 1.0;
              for (int e = 0; e < k; ++e) w *= (u + v1 - v2 - ld);
              naive += chi3.eval((int64_t)fi.divisors[i]) *
                       chi5.eval((int64_t)fi.divisors[j]) * ph * w;
            }
          }
          auto got = delta_k_window_sum(fi, chi3, chi5, theta, k, u, v1, v2);
          CHECK(std::abs(got - naive) < 1e-12);
        }
  }
}

TEST_CASE("delta_k sup anchors") {
  auto chi3 = character_mod(3, 1);
  for (int k : {0, 1, 2, 5})
    for (double theta : {0.0, 0.5}) {
      auto r = delta_k_sup(factorize(sieve(), 1), chi3, chi3, theta, k);
      CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
    }
  auto r20 = delta_k_sup(factorize(sieve(), 2), chi3, chi3, 0.0, 0);
  CHECK(r20.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(delta_k_sup(factorize(sieve(), 2), chi3, chi3, 0.0, 65),
                  std::domain_error);
}

TEST_CASE("delta_k sup vs dense grid oracle") {
  auto chi3 = character_mod(3, 1);
  auto chi5 = character_mod(5, 1);
  for (uint64_t n : {2ull, 6ull, 14ull, 70ull})
    for (int k : {1, 2, 3})
      for (double theta : {0.0, 0.7}) {
        auto fi = factorize(sieve(), n);
        double exact = delta_k_sup(fi, chi3, chi5, theta, k).value;
        double grid = delta_k_sup_grid(fi, chi3, chi5, theta, k, 1e-3);
        CHECK(exact >= grid - 1e-9);
        CHECK(exact <= grid + 1e-3);
      }
}

TEST_CASE("delta_k witness reproduces the value") {
  auto chi3 = character_mod(3, 1);
  auto chi5 = character_mod(5, 1);
  for (uint64_t n : {1ull, 2ull, 14ull, 70ull})
    for (int k : {0, 1, 2}) {
      auto fi = factorize(sieve(), n);
      auto r = delta_k_sup(fi, chi3, chi5, 0.4, k);
      auto re = delta_k_window_sum(fi, chi3, chi5, 0.4, k, r.u, r.v1, r.v2);
      CHECK(std::abs(std::abs(re) - r.value) < 1e-6);
    }
}

TEST_CASE("delta_k with k=0 is independent of v2") {
  auto chi3 = character_mod(3, 1);
  auto fi = factorize(sieve(), 10);
  for (double u : {-0.5, 0.3})
    for (double v1 : {0.4, 1.0}) {
      auto a = delta_k_window_sum(fi, chi3, chi3, 0.8, 0, u, v1, 0.0);
      auto b = delta_k_window_sum(fi, chi3, chi3, 0.8, 0, u, v1, 1.0);
      CHECK(std::abs(a - b) == 0.0);
    }
}

TEST_CASE("one-prime extension identity") {
  auto chi3 = character_mod(3, 1);
  // n=1, p=2 at the stated point: lhs = -1 = 1 + chi(2) + chi(2)
  auto f1 = factorize(sieve(), 1);
  auto f2 = factorize(sieve(), 2);
  DivisorPairTable t2(f2, chi3, chi3);
  auto lhs = delta3_window_sum(t2, {-0.1, -0.1}, {1, 1});
  CHECK(std::abs(lhs - cplx{-1, 0}) < 1e-12);
  DivisorPairTable t1(f1, chi3, chi3);
  double lp = std::log(2.0);
  auto rhs = delta3_window_sum(t1, {-0.1, -0.1}, {1, 1}) +
             chi3.eval(2) * delta3_window_sum(t1, {-0.1 - lp, -0.1}, {1, 1}) +
             chi3.eval(2) * delta3_window_sum(t1, {-0.1, -0.1 - lp}, {1, 1});
  CHECK(std::abs(lhs - rhs) < 1e-12);

  auto chi7 = character_mod(7, 1);
  auto d = recurrence_defect(factorize(sieve(), 15), 2, chi7, chi7, 1000, 99);
  CHECK(d.shifted < 1e-9);
  CHECK(d.points >= 1000);

  // the unshifted third term genuinely differs
  auto d2 = recurrence_defect(factorize(sieve(), 5), 2, chi3, chi3, 500, 7);
  CHECK(d2.shifted < 1e-9);
  CHECK(d2.literal > 1e-6);
}
