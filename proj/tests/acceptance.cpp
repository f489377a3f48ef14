// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion.  Exit code 0 iff all criteria pass.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "deltachi/audits.hpp"
#include "deltachi/characters.hpp"
#include "deltachi/constants.hpp"
#include "deltachi/delta.hpp"
#include "deltachi/experiments.hpp"
#include "deltachi/io.hpp"
#include "deltachi/moments.hpp"
#include "deltachi/primes.hpp"
#include "deltachi/sieve.hpp"

using namespace deltachi;

namespace {

int g_failures = 0;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const auto t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

void report(int id, const std::string& name, bool ok, const std::string& detail,
            double seconds) {
  std::printf("%s  criterion %d (%s): %s  [%.1fs]\n", ok ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

void parallel_for(uint64_t count, int threads, const std::function<void(uint64_t)>& fn) {
  if (threads <= 1) {
    for (uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<uint64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      uint64_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

int hw_threads() {
  unsigned h = std::thread::hardware_concurrency();
  return h ? (int)h : 4;
}

std::string fmt(double x) { return format_double(x); }

// ---- criterion 1: rho ----
void criterion_rho() {
  double t0 = now_seconds();
  auto rq = rho_by_quadrature(4096);
  double el = now_seconds() - t0;
  bool ok = std::abs(rq.defect) <= 1e-9 &&
            std::abs(std::round(rq.value * 1000.0) / 1000.0 - 0.218) < 1e-12 &&
            el < 1.0;
  report(1, "rho", ok,
         "value=" + fmt(rq.value) + " defect=" + fmt(rq.defect), el);
}

// ---- criterion 2: kappa table ----
void criterion_kappa() {
  double t0 = now_seconds();
  bool ok = kappa(2) == 2.5;
  double lo = 10, hi = 0;
  for (int r = 2; r <= 1000; ++r) {
    double k = kappa(r);
    lo = std::min(lo, k);
    hi = std::max(hi, k);
    ok = ok && k >= 2.0 - 1e-12 && k <= 2.5 + 1e-12;
  }
  double el = now_seconds() - t0;
  ok = ok && el < 1.0;
  report(2, "kappa", ok, "kappa(2)=" + fmt(kappa(2)) + " range [" + fmt(lo) +
                             ", " + fmt(hi) + "] over r<=1000", el);
}

// ---- criterion 3: oracle equivalence ----
void criterion_oracle(const FactorSieve& sieve) {
  double t0 = now_seconds();
  struct PairSpec {
    const char* a;
    const char* b;
  };
  const PairSpec pairs[] = {{"3:1", "3:1"}, {"3:1", "5:1"}, {"5:1", "7:1"}};
  std::atomic<uint64_t> checked{0}, bad{0};
  std::mutex m;
  std::string first_bad;
  for (const auto& ps : pairs) {
    DirichletCharacter c1 = parse_char_spec(ps.a), c2 = parse_char_spec(ps.b);
    uint64_t coprime = (uint64_t)c1.modulus() * c2.modulus();
    parallel_for(3000, hw_threads(), [&](uint64_t i) {
      uint64_t n = i + 1;
      FactoredInteger fi = factorize(sieve, n);
      if (!fi.squarefree || std::gcd(n, coprime) != 1) return;
      try {
        auto a = delta3_sup(fi, c1, c2);
        auto b = delta3_sup_bruteforce(fi, c1, c2);
        ++checked;
        if (std::abs(a.value - b.value) > 1e-9 || !(a.run1 == b.run1) ||
            !(a.run2 == b.run2)) {
          ++bad;
          std::lock_guard<std::mutex> lk(m);
          if (first_bad.empty())
            first_bad = "n=" + std::to_string(n) + " pair " + ps.a + "," + ps.b;
        }
      } catch (const std::exception& e) {
        ++bad;
        std::lock_guard<std::mutex> lk(m);
        if (first_bad.empty()) first_bad = e.what();
      }
    });
  }
  double el = now_seconds() - t0;
  report(3, "oracle equivalence", bad == 0,
         std::to_string(checked.load()) + " comparisons over 3 pairs" +
             (bad ? ", first mismatch: " + first_bad : ""),
         el);
}

// ---- criterion 4: Parseval identity ----
void criterion_parseval(const FactorSieve& sieve) {
  double t0 = now_seconds();
  auto chi3 = parse_char_spec("3:1");
  auto chi5 = parse_char_spec("5:1");

  auto anchor = audit_parseval_delta3(factorize(sieve, 1), chi3, chi5);
  bool ok = std::abs(anchor.lhs - 0.25) < 1e-12 &&
            std::abs(anchor.rhs - 0.25) <= 1e-3 * 0.25;

  std::atomic<uint64_t> count{0}, bad{0};
  double worst = 0.0;
  std::mutex m;
  struct Fam {
    DirichletCharacter a, b;
    uint64_t coprime;
  };
  Fam fams[] = {{chi3, chi3, 3}, {chi3, chi5, 15}};
  for (const auto& fam : fams) {
    parallel_for(200, hw_threads(), [&](uint64_t i) {
      uint64_t n = i + 1;
      FactoredInteger fi = factorize(sieve, n);
      if (!fi.squarefree || std::gcd(n, fam.coprime) != 1) return;
      auto r = audit_parseval_delta3(fi, fam.a, fam.b);
      double rel = std::abs(r.lhs - r.rhs) / std::max(r.lhs, std::abs(r.rhs));
      ++count;
      std::lock_guard<std::mutex> lk(m);
      worst = std::max(worst, rel);
      if (rel >= 1e-3) ++bad;
    });
  }
  ok = ok && bad == 0;
  double el = now_seconds() - t0;
  report(4, "parseval", ok,
         "anchor lhs=" + fmt(anchor.lhs) + " rhs=" + fmt(anchor.rhs) + "; " +
             std::to_string(count.load()) + " n, worst rel defect " + fmt(worst),
         el);
}

// ---- criterion 5: inequality audits ----
void criterion_inequalities(const FactorSieve& sieve) {
  double t0 = now_seconds();
  auto chi3 = parse_char_spec("3:1");
  auto chi5 = parse_char_spec("5:1");
  std::atomic<uint64_t> count{0}, bad{0};
  std::mutex m;
  double min_slack = std::numeric_limits<double>::infinity();
  std::string first_bad;

  auto note = [&](const AuditReport& r) {
    ++count;
    std::lock_guard<std::mutex> lk(m);
    min_slack = std::min(min_slack, r.slack);
    if (!r.pass) {
      ++bad;
      if (first_bad.empty())
        first_bad = r.lemma + " n=" + std::to_string(r.n) +
                    " q=" + std::to_string(r.q) + " k=" + std::to_string(r.k);
    }
  };

  parallel_for(2000, hw_threads(), [&](uint64_t i) {
    uint64_t n = i + 1;
    FactoredInteger fi = factorize(sieve, n);
    if (!fi.squarefree) return;
    if (std::gcd(n, 15ull) == 1)
      for (int q : {2, 3}) note(audit_lemma21(fi, chi3, chi5, q, {}));
    if (n % 3 != 0)
      for (int q : {1, 2, 3}) note(audit_lemma22(fi, chi3, q));
  });
  parallel_for(500, hw_threads(), [&](uint64_t i) {
    uint64_t n = i + 1;
    FactoredInteger fi = factorize(sieve, n);
    if (!fi.squarefree || std::gcd(n, 15ull) != 1) return;
    for (int k : {0, 1, 2})
      for (double theta : {0.0, 0.7})
        note(audit_lemma23(fi, chi3, chi5, theta, k, 2));
  });
  double el = now_seconds() - t0;
  report(5, "inequality audits", bad == 0,
         std::to_string(count.load()) + " reports, min slack " + fmt(min_slack) +
             (bad ? ", first failure " + first_bad : ""),
         el);
}

// ---- criterion 6: prime equidistribution ----
void criterion_primes(const FactorSieve& sieve) {
  double t0 = now_seconds();
  auto chi3 = parse_char_spec("3:1");
  auto chi5 = parse_char_spec("5:1");
  const uint64_t x = 10000000;

  double a0 = prime_average(sieve, x, chi3, 0.0);
  double a1 = prime_average(sieve, x, chi3, 1.0);
  double tw5 = std::abs(prime_twisted_average(sieve, x, chi5, 0.0));
  double tw3 = std::abs(prime_twisted_average(sieve, x, chi3, 2.0));
  double el = now_seconds() - t0;

  double target1 = rho_closed_form() + 2.0;
  bool ok0 = std::abs(a0 - 2.5) / 2.5 <= 0.01;
  bool ok1 = std::abs(a1 - target1) / target1 <= 0.02;
  bool oktw = tw5 < 0.02 && tw3 < 0.02;
  bool ok = ok0 && ok1 && oktw && el < 60.0;
  std::ostringstream detail;
  detail << "theta=0: " << fmt(a0) << " vs 2.5 (" << (ok0 ? "ok" : "off") << "); "
         << "theta=1: " << fmt(a1) << " vs " << fmt(target1) << " rel "
         << fmt(std::abs(a1 - target1) / target1) << " (" << (ok1 ? "ok" : "off")
         << "); twisted moduli " << fmt(tw5) << ", " << fmt(tw3);
  report(6, "prime equidistribution", ok, detail.str(), el);
}

// ---- criterion 7: contrast experiment ----
void criterion_contrast(const FactorSieve& sieve) {
  double t0 = now_seconds();
  std::vector<uint64_t> grid;
  for (int k = 10; k <= 20; ++k) grid.push_back(1ull << k);
  auto con = contrast_principal_case(sieve, grid, "3:1", "5:1", 1.0, hw_threads(),
                                     0.001, 424242);

  // (a) distinct pair: nonnegative loglog slope; S/x within factor 10 of
  //     c (log x)^rho with c fitted at the midpoint checkpoint
  auto fit_a = fit_exponent(con.distinct_pair, "loglog");
  bool ok_a = fit_a.slope >= 0.0;
  double rho = rho_closed_form();
  size_t mid = con.distinct_pair.rows.size() / 2;
  const auto& rows = con.distinct_pair.rows;
  double c = rows[mid].S_over_x / std::pow(std::log((double)rows[mid].x), rho);
  double worst_factor = 1.0;
  for (const auto& r : rows) {
    double model = c * std::pow(std::log((double)r.x), rho);
    double f = r.S_over_x / model;
    worst_factor = std::max(worst_factor, std::max(f, 1.0 / f));
  }
  ok_a = ok_a && worst_factor <= 10.0;

  // (b) equal pair: positive log-linear slope with R^2 >= 0.9
  auto fit_b = fit_exponent(con.equal_pair, "log-linear");
  bool ok_b = fit_b.slope > 0.0 && fit_b.r_squared >= 0.9;

  // (c) ratio strictly increasing across the last 5 checkpoints
  bool ok_c = true;
  size_t nr = con.ratio.size();
  for (size_t i = nr - 5; i + 1 < nr; ++i)
    if (!(con.ratio[i] < con.ratio[i + 1])) ok_c = false;

  double el = now_seconds() - t0;
  std::ostringstream detail;
  detail << "(a) slope=" << fmt(fit_a.slope) << " worst factor "
         << fmt(worst_factor) << (ok_a ? " ok" : " off") << "; (b) slope="
         << fmt(fit_b.slope) << " R2=" << fmt(fit_b.r_squared)
         << (ok_b ? " ok" : " off") << "; (c) last ratios";
  for (size_t i = nr - 5; i < nr; ++i) detail << " " << fmt(con.ratio[i]);
  detail << (ok_c ? " ok" : " off");
  report(7, "contrast", ok_a && ok_b && ok_c, detail.str(), el);
}

// ---- criterion 8: recurrence audit ----
void criterion_recurrence(const FactorSieve& sieve) {
  double t0 = now_seconds();
  auto chi3 = parse_char_spec("3:1");
  auto chi5 = parse_char_spec("5:1");
  uint64_t state = 20260809;
  auto next = [&state]() {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  const uint64_t small_primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  double worst = 0.0;
  uint64_t points = 0;
  for (int i = 0; i < 50; ++i) {
    uint64_t n = 1 + next() % 10000;
    uint64_t p = small_primes[next() % 10];
    while (n % p == 0) n /= p;
    auto fi = factorize(sieve, n);
    auto d = recurrence_defect(fi, p, chi3, chi5, 1000, next());
    worst = std::max(worst, d.shifted);
    points += d.points;
  }
  double el = now_seconds() - t0;
  report(8, "recurrence", worst < 1e-9,
         "max defect " + fmt(worst) + " over 50 pairs, " +
             std::to_string(points) + " points",
         el);
}

// ---- criterion 9: nearby-phase ratio stability ----
void criterion_ratio_stability(const FactorSieve& sieve) {
  double t0 = now_seconds();
  auto chi3 = parse_char_spec("3:1");
  auto s1 = lemma51_sweep(sieve, chi3, 0.5, 10000, 0.05);
  auto s2 = lemma51_sweep(sieve, chi3, 0.5, 20000, 0.05);
  double b1 = s1.max_log_ratio, b2 = s2.max_log_ratio;
  bool ok = std::isfinite(b1) && std::isfinite(b2) && b1 > 0 && b2 > 0 &&
            std::abs(b1 - b2) <= 0.10 * std::max(b1, b2);
  double el = now_seconds() - t0;
  ok = ok && el < 60.0;
  report(9, "nearby-phase ratio", ok,
         "B(1e4)=" + fmt(b1) + " B(2e4)=" + fmt(b2) + " excluded " +
             std::to_string(s1.excluded + s2.excluded),
         el);
}

// ---- criterion 10: scan determinism ----
void criterion_determinism(const FactorSieve& sieve) {
  double t0 = now_seconds();
  MomentScanConfig cfg;
  cfg.x_grid = {1024, 4096, 16384, 65536};
  cfg.chi1_spec = "3:1";
  cfg.chi2_spec = "5:1";
  cfg.oracle_fraction = 0.01;
  cfg.threads = 1;
  auto a = moment_scan(sieve, cfg);
  cfg.threads = 8;
  auto b = moment_scan(sieve, cfg);
  std::ostringstream osa, osb;
  write_series_csv(a, osa);
  write_series_csv(b, osb);
  bool ok = osa.str() == osb.str();
  double el = now_seconds() - t0;
  report(10, "determinism", ok,
         ok ? "threads 1 and 8 byte-identical (" +
                  std::to_string(osa.str().size()) + " bytes)"
            : "outputs differ",
         el);
}

}  // namespace

int main() {
  std::printf("building sieve to 1e7...\n");
  FactorSieve sieve = build_sieve(10000000);

  criterion_rho();
  criterion_kappa();
  criterion_oracle(sieve);
  criterion_parseval(sieve);
  criterion_inequalities(sieve);
  criterion_primes(sieve);
  criterion_contrast(sieve);
  criterion_recurrence(sieve);
  criterion_ratio_stability(sieve);
  criterion_determinism(sieve);

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return 1;
}
