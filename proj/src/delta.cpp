#include "deltachi/delta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace deltachi {

namespace {

constexpr double kTieEps = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Portable uniform doubles from splitmix64 bits.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next_u64() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double next_double() { return (double)(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * next_double(); }
};

double poly_weight(double base, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

}  // namespace

std::pair<int, int> window_ranks(std::span<const double> logs, double u, double v) {
  // lo: first index with log > u;  hi: last index with log <= u + v.
  int lo = (int)(std::upper_bound(logs.begin(), logs.end(), u) - logs.begin());
  int hi = (int)(std::upper_bound(logs.begin(), logs.end(), u + v) - logs.begin()) - 1;
  return {lo, hi};
}

std::vector<WindowRun> unit_window_runs(std::span<const double> logs) {
  std::vector<WindowRun> runs;
  const int t = (int)logs.size();
  for (int lo = 0; lo < t; ++lo)
    for (int hi = lo; hi < t && logs[hi] - logs[lo] < 1.0; ++hi)
      runs.push_back({lo, hi});
  return runs;
}

std::pair<double, double> run_witness(std::span<const double> logs,
                                      const WindowRun& run) {
  if (run.empty()) return {logs.empty() ? 1.0 : logs.back() + 1.0, 1.0};
  const int t = (int)logs.size();
  double span = logs[run.hi] - logs[run.lo];
  double left_gap = run.lo > 0 ? logs[run.lo] - logs[run.lo - 1] : kInf;
  double right_gap = run.hi + 1 < t ? logs[run.hi + 1] - logs[run.hi] : kInf;
  double eps = std::min({1e-6, left_gap / 2, right_gap / 2, (1.0 - span) / 3});
  return {logs[run.lo] - eps, std::min(1.0, span + 2 * eps)};
}

DivisorPairTable::DivisorPairTable(FactoredInteger fi,
                                   const DirichletCharacter& chi1,
                                   const DirichletCharacter& chi2)
    : fi_(std::move(fi)), tau_((int)fi_.tau()) {
  const auto& ds = fi_.divisors;
  w1_.resize(tau_);
  w2_.resize(tau_);
  for (int i = 0; i < tau_; ++i) {
    w1_[i] = chi1.eval((int64_t)ds[i]);
    w2_[i] = chi2.eval((int64_t)ds[i]);
  }
  div_.assign((size_t)tau_ * tau_, 0);
  if (fi_.squarefree) {
    // d_i d_j | n iff gcd(d_i, d_j) = 1; use prime bitmasks
    std::vector<uint32_t> mask(tau_, 0);
    for (int i = 0; i < tau_; ++i) {
      uint64_t d = ds[i];
      for (size_t b = 0; b < fi_.factors.size(); ++b)
        if (d % fi_.factors[b].first == 0) mask[i] |= 1u << b;
    }
    for (int i = 0; i < tau_; ++i)
      for (int j = 0; j < tau_; ++j)
        div_[(size_t)i * tau_ + j] = (mask[i] & mask[j]) == 0;
  } else {
    for (int i = 0; i < tau_; ++i) {
      uint64_t m = fi_.n / ds[i];
      for (int j = 0; j < tau_; ++j)
        div_[(size_t)i * tau_ + j] = (m % ds[j] == 0);
    }
  }
  prefix_.assign(((size_t)tau_ + 1) * (tau_ + 1), {});
  for (int i = 0; i < tau_; ++i)
    for (int j = 0; j < tau_; ++j) {
      std::complex<double> e = div_[(size_t)i * tau_ + j]
                                   ? w1_[i] * w2_[j]
                                   : std::complex<double>{};
      prefix_[(size_t)(i + 1) * (tau_ + 1) + (j + 1)] =
          e + prefix_[(size_t)i * (tau_ + 1) + (j + 1)] +
          prefix_[(size_t)(i + 1) * (tau_ + 1) + j] -
          prefix_[(size_t)i * (tau_ + 1) + j];
    }
}

std::complex<double> DivisorPairTable::rect_sum(int i1, int i2, int j1,
                                                int j2) const {
  if (i1 > i2 || j1 > j2) return {};
  i1 = std::max(i1, 0);
  j1 = std::max(j1, 0);
  i2 = std::min(i2, tau_ - 1);
  j2 = std::min(j2, tau_ - 1);
  if (i1 > i2 || j1 > j2) return {};
  const size_t w = (size_t)tau_ + 1;
  return prefix_[(size_t)(i2 + 1) * w + (j2 + 1)] -
         prefix_[(size_t)i1 * w + (j2 + 1)] -
         prefix_[(size_t)(i2 + 1) * w + j1] + prefix_[(size_t)i1 * w + j1];
}

std::complex<double> delta3_window_sum(const DivisorPairTable& table,
                                       std::array<double, 2> u,
                                       std::array<double, 2> v) {
  const auto& logs = table.fi().log_divisors;
  auto [a1, b1] = window_ranks(logs, u[0], v[0]);
  auto [a2, b2] = window_ranks(logs, u[1], v[1]);
  return table.rect_sum(a1, b1, a2, b2);
}

namespace {

SupResult sup_from_runs(const DivisorPairTable& table, bool brute) {
  const auto& logs = table.fi().log_divisors;
  auto runs = unit_window_runs(logs);
  SupResult best;
  best.value = -1.0;
  for (const auto& r1 : runs)
    for (const auto& r2 : runs) {
      std::complex<double> s;
      if (!brute) {
        s = table.rect_sum(r1.lo, r1.hi, r2.lo, r2.hi);
      } else {
        for (int i = r1.lo; i <= r1.hi; ++i)
          for (int j = r2.lo; j <= r2.hi; ++j) s += table.entry(i, j);
      }
      double m = std::abs(s);
      if (m > best.value + kTieEps) {
        best.value = m;
        best.run1 = r1;
        best.run2 = r2;
      }
    }
  if (best.value < 0) {  // no runs (cannot happen: divisor 1 always exists)
    best.value = 0;
    return best;
  }
  auto [u1, v1] = run_witness(logs, best.run1);
  auto [u2, v2] = run_witness(logs, best.run2);
  best.arg_u = {u1, u2};
  best.arg_v = {v1, v2};
  return best;
}

}  // namespace

SupResult delta3_sup(const DivisorPairTable& table) {
  return sup_from_runs(table, /*brute=*/false);
}

SupResult delta3_sup(const FactoredInteger& fi, const DirichletCharacter& chi1,
                     const DirichletCharacter& chi2) {
  DivisorPairTable table(fi, chi1, chi2);
  return delta3_sup(table);
}

SupResult delta3_sup_bruteforce(const FactoredInteger& fi,
                                const DirichletCharacter& chi1,
                                const DirichletCharacter& chi2,
                                const BruteForceOptions& opts) {
  if (fi.tau() > 96)
    throw std::domain_error("delta3_sup_bruteforce: tau(n) = " +
                            std::to_string(fi.tau()) + " exceeds oracle guard");
  DivisorPairTable table(fi, chi1, chi2);
  SupResult best = sup_from_runs(table, /*brute=*/true);
  if (opts.grid_check) {
    double hi = table.fi().log_divisors.back() + 0.05;
    double lo = -1.05;
    for (int a = 0; a < opts.u_samples; ++a)
      for (int b = 0; b < opts.u_samples; ++b)
        for (int c = 1; c <= opts.v_samples; ++c)
          for (int d = 1; d <= opts.v_samples; ++d) {
            std::array<double, 2> u{lo + (hi - lo) * a / (opts.u_samples - 1),
                                    lo + (hi - lo) * b / (opts.u_samples - 1)};
            std::array<double, 2> v{(double)c / opts.v_samples,
                                    (double)d / opts.v_samples};
            if (std::abs(delta3_window_sum(table, u, v)) > best.value + 1e-9)
              throw std::logic_error(
                  "delta3_sup_bruteforce: grid sample exceeds reported sup");
          }
  }
  return best;
}

SupResult1D delta_sup(std::span<const uint64_t> divisors,
                      const DirichletCharacter& chi) {
  const int t = (int)divisors.size();
  std::vector<double> logs(t);
  std::vector<std::complex<double>> prefix(t + 1);
  for (int i = 0; i < t; ++i) {
    logs[i] = std::log((double)divisors[i]);
    prefix[i + 1] = prefix[i] + chi.eval((int64_t)divisors[i]);
  }
  auto runs = unit_window_runs(logs);
  SupResult1D best;
  best.value = -1.0;
  for (const auto& r : runs) {
    double m = std::abs(prefix[r.hi + 1] - prefix[r.lo]);
    if (m > best.value + kTieEps) {
      best.value = m;
      best.run = r;
    }
  }
  if (best.value < 0) best.value = 0;
  auto [u, v] = run_witness(logs, best.run);
  best.arg_u = u;
  best.arg_v = v;
  return best;
}

SupResult1D delta_sup(const FactoredInteger& fi, const DirichletCharacter& chi) {
  return delta_sup(std::span<const uint64_t>(fi.divisors), chi);
}

double delta_sup_over_divisors(const FactoredInteger& fi,
                               const DirichletCharacter& chi) {
  double best = 0.0;
  std::vector<uint64_t> sub;
  for (uint64_t d : fi.divisors) {
    sub.clear();
    for (uint64_t e : fi.divisors)
      if (d % e == 0) sub.push_back(e);
    best = std::max(best, delta_sup(std::span<const uint64_t>(sub), chi).value);
  }
  return best;
}

std::complex<double> twisted_divisor_sum(std::span<const uint64_t> divisors,
                                         const DirichletCharacter& chi,
                                         double theta) {
  std::complex<double> s;
  for (uint64_t d : divisors) {
    auto c = chi.eval((int64_t)d);
    if (c != std::complex<double>{}) {
      double ang = theta * std::log((double)d);
      s += c * std::complex<double>(std::cos(ang), std::sin(ang));
    }
  }
  return s;
}

std::complex<double> twisted_divisor_sum(const FactoredInteger& fi,
                                         const DirichletCharacter& chi,
                                         double theta) {
  std::complex<double> s;
  for (size_t i = 0; i < fi.divisors.size(); ++i) {
    auto c = chi.eval((int64_t)fi.divisors[i]);
    if (c != std::complex<double>{}) {
      double ang = theta * fi.log_divisors[i];
      s += c * std::complex<double>(std::cos(ang), std::sin(ang));
    }
  }
  return s;
}

std::complex<double> twisted_pair_sum(const FactoredInteger& fi,
                                      const DirichletCharacter& chi1,
                                      const DirichletCharacter& chi2,
                                      double theta1, double theta2) {
  const auto& ds = fi.divisors;
  const int t = (int)ds.size();
  std::complex<double> s;
  for (int i = 0; i < t; ++i) {
    auto c1 = chi1.eval((int64_t)ds[i]);
    if (c1 == std::complex<double>{}) continue;
    double a1 = theta1 * fi.log_divisors[i];
    c1 *= std::complex<double>(std::cos(a1), std::sin(a1));
    uint64_t m = fi.n / ds[i];
    for (int j = 0; j < t; ++j) {
      if (ds[j] > m) break;
      if (m % ds[j]) continue;
      auto c2 = chi2.eval((int64_t)ds[j]);
      if (c2 == std::complex<double>{}) continue;
      double a2 = theta2 * fi.log_divisors[j];
      s += c1 * c2 * std::complex<double>(std::cos(a2), std::sin(a2));
    }
  }
  return s;
}

// ---- delta_k ----

namespace {

struct PolyContext {
  const FactoredInteger* fi;
  std::vector<std::complex<double>> coeff;  // c_i = chi1(d_i) * T_theta(i)
};

PolyContext make_poly_context(const FactoredInteger& fi,
                              const DirichletCharacter& chi1,
                              const DirichletCharacter& chi2, double theta) {
  return {&fi, poly_window_coefficients(fi, chi1, chi2, theta)};
}

std::complex<double> eval_poly(const PolyContext& ctx, const WindowRun& r,
                               double w, int k) {
  std::complex<double> s;
  for (int i = r.lo; i <= r.hi; ++i)
    s += ctx.coeff[i] * poly_weight(w - ctx.fi->log_divisors[i], k);
  return s;
}

std::complex<double> eval_poly_deriv(const PolyContext& ctx, const WindowRun& r,
                                     double w, int k) {
  std::complex<double> s;
  for (int i = r.lo; i <= r.hi; ++i)
    s += ctx.coeff[i] * poly_weight(w - ctx.fi->log_divisors[i], k - 1);
  return (double)k * s;
}

// d/dw |P(w)|^2 = 2 Re(conj(P) P')
double sq_mod_deriv(const PolyContext& ctx, const WindowRun& r, double w, int k) {
  auto p = eval_poly(ctx, r, w, k);
  auto dp = eval_poly_deriv(ctx, r, w, k);
  return 2.0 * (p.real() * dp.real() + p.imag() * dp.imag());
}

struct RunWindow {
  double wlo, whi;
};

RunWindow run_w_interval(const FactoredInteger& fi, const WindowRun& r) {
  const auto& logs = fi.log_divisors;
  double whi = logs[r.lo] + 1.0;
  if (r.hi + 1 < (int)logs.size()) whi = std::min(whi, logs[r.hi + 1]);
  return {logs[r.hi] - 1.0, whi};
}

}  // namespace

std::vector<std::complex<double>> poly_window_coefficients(
    const FactoredInteger& fi, const DirichletCharacter& chi1,
    const DirichletCharacter& chi2, double theta) {
  const auto& ds = fi.divisors;
  const int t = (int)ds.size();
  std::vector<std::complex<double>> coeff(t);
  for (int i = 0; i < t; ++i) {
    auto c1 = chi1.eval((int64_t)ds[i]);
    if (c1 == std::complex<double>{}) continue;
    uint64_t m = fi.n / ds[i];
    std::complex<double> inner;
    for (int j = 0; j < t; ++j) {
      if (ds[j] > m) break;
      if (m % ds[j]) continue;
      auto c2 = chi2.eval((int64_t)ds[j]);
      if (c2 == std::complex<double>{}) continue;
      double a = theta * fi.log_divisors[j];
      inner += c2 * std::complex<double>(std::cos(a), std::sin(a));
    }
    coeff[i] = c1 * inner;
  }
  return coeff;
}

std::complex<double> delta_k_window_sum(const FactoredInteger& fi,
                                        const DirichletCharacter& chi1,
                                        const DirichletCharacter& chi2,
                                        double theta, int k, double u, double v1,
                                        double v2) {
  if (k < 0 || k > kMaxPolyDegree)
    throw std::domain_error("delta_k: k out of range");
  auto ctx = make_poly_context(fi, chi1, chi2, theta);
  auto [a, b] = window_ranks(fi.log_divisors, u, v1);
  std::complex<double> s;
  double w = u + v1 - v2;
  for (int i = a; i <= b; ++i)
    s += ctx.coeff[i] * poly_weight(w - fi.log_divisors[i], k);
  return s;
}

DeltaKSup delta_k_sup(const FactoredInteger& fi, const DirichletCharacter& chi1,
                      const DirichletCharacter& chi2, double theta, int k) {
  if (k < 0 || k > kMaxPolyDegree)
    throw std::domain_error("delta_k: k out of range");
  auto ctx = make_poly_context(fi, chi1, chi2, theta);
  const auto& logs = fi.log_divisors;
  auto runs = unit_window_runs(logs);
  DeltaKSup best;
  best.value = -1.0;
  for (const auto& r : runs) {
    auto [wlo, whi] = run_w_interval(fi, r);
    double run_best = 0.0, run_w = whi;
    if (k == 0) {
      run_best = std::abs(eval_poly(ctx, r, whi, 0));
    } else {
      // candidates: endpoints plus zeros of d|P|^2/dw (sign-change bisection)
      std::vector<double> cand{wlo, whi};
      const int m = std::max(65, 16 * k + 1);
      double prev = sq_mod_deriv(ctx, r, wlo, k);
      double prev_w = wlo;
      for (int s = 1; s < m; ++s) {
        double w = wlo + (whi - wlo) * s / (m - 1);
        double cur = sq_mod_deriv(ctx, r, w, k);
        if ((prev < 0 && cur > 0) || (prev > 0 && cur < 0) || prev == 0.0) {
          double a = prev_w, b = w, fa = prev;
          for (int it = 0; it < 60 && b - a > 1e-10; ++it) {
            double mid = 0.5 * (a + b), fm = sq_mod_deriv(ctx, r, mid, k);
            if ((fa < 0) == (fm < 0)) {
              a = mid;
              fa = fm;
            } else {
              b = mid;
            }
          }
          cand.push_back(0.5 * (a + b));
        }
        prev = cur;
        prev_w = w;
      }
      for (double w : cand) {
        double v = std::abs(eval_poly(ctx, r, w, k));
        if (v > run_best) {
          run_best = v;
          run_w = w;
        }
      }
    }
    if (run_best > best.value + kTieEps) {
      best.value = run_best;
      best.run = r;
      best.w = run_w;
    }
  }
  if (best.value < 0) best.value = 0;
  // witness (u, v1, v2) reproducing w on the winning run; exact except when
  // w sits on the open end of its interval, where it is pulled in by ~1e-9
  auto [u, v1] = run_witness(logs, best.run);
  double v2 = u + v1 - best.w;
  if (v2 > 1.0) {
    // w below the witness window top: raise v2 to 1, shrink the window;
    // v1 = w + 1 - u <= span + 2 eps < 1 since w < u + v1 - 1
    v1 = best.w + 1.0 - u;
    v2 = 1.0;
  } else if (v2 < 0.0) {
    // w above the witness window top: pin the window top at w itself,
    // pulled inside the open bounds log d_lo + 1 and log d_{hi+1}
    double gapl = best.run.lo > 0 ? logs[best.run.lo] - logs[best.run.lo - 1]
                                  : std::numeric_limits<double>::infinity();
    double epsu = std::min(1e-9, gapl / 2);
    double weff = std::min(best.w, logs[best.run.lo] + 1.0 - epsu);
    if (best.run.hi + 1 < (int)logs.size())
      weff = std::min(weff, logs[best.run.hi + 1] - epsu);
    u = logs[best.run.lo] - epsu;
    v1 = std::min(1.0, weff - u);
    v2 = 0.0;
  }
  best.u = u;
  best.v1 = v1;
  best.v2 = v2;
  return best;
}

double delta_k_sup_grid(const FactoredInteger& fi, const DirichletCharacter& chi1,
                        const DirichletCharacter& chi2, double theta, int k,
                        double w_step) {
  auto ctx = make_poly_context(fi, chi1, chi2, theta);
  auto runs = unit_window_runs(fi.log_divisors);
  double best = 0.0;
  for (const auto& r : runs) {
    auto [wlo, whi] = run_w_interval(fi, r);
    for (double w = wlo; w < whi + w_step; w += w_step)
      best = std::max(best, std::abs(eval_poly(ctx, r, std::min(w, whi), k)));
  }
  return best;
}

RecurrenceDefect recurrence_defect(const FactoredInteger& fi, uint64_t p,
                                   const DirichletCharacter& chi1,
                                   const DirichletCharacter& chi2, int samples,
                                   uint64_t seed) {
  FactoredInteger fnp = multiply_by_prime(fi, p);
  DivisorPairTable big(fnp, chi1, chi2);
  DivisorPairTable base(fi, chi1, chi2);
  const double lp = std::log((double)p);
  const auto c1p = chi1.eval((int64_t)p);
  const auto c2p = chi2.eval((int64_t)p);

  RecurrenceDefect out;
  auto check = [&](std::array<double, 2> u, std::array<double, 2> v) {
    auto lhs = delta3_window_sum(big, u, v);
    auto a = delta3_window_sum(base, u, v);
    auto b = delta3_window_sum(base, {u[0] - lp, u[1]}, v);
    auto c = delta3_window_sum(base, {u[0], u[1] - lp}, v);
    out.shifted = std::max(out.shifted, std::abs(lhs - (a + c1p * b + c2p * c)));
    out.literal = std::max(out.literal, std::abs(lhs - (a + c1p * b + c2p * a)));
    ++out.points;
  };

  Rng rng(seed);
  const double hi = fnp.log_divisors.back() + 1.0;
  for (int s = 0; s < samples; ++s) {
    std::array<double, 2> u{rng.uniform(-1.2, hi), rng.uniform(-1.2, hi)};
    std::array<double, 2> v{rng.next_double(), rng.next_double()};
    check(u, v);
  }
  const double kAdj = 1e-7;
  for (double ld : fnp.log_divisors)
    for (double s : {-kAdj, kAdj}) {
      double other = rng.uniform(-1.2, hi);
      check({ld + s, other}, {1.0, 1.0});
      check({other, ld + s}, {rng.next_double(), rng.next_double()});
    }
  return out;
}

}  // namespace deltachi
