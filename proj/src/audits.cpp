#include "deltachi/audits.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "deltachi/io.hpp"
#include "deltachi/quadrature.hpp"

namespace deltachi {

namespace {

bool ineq_pass(double lhs, double rhs) {
  return rhs - lhs >= -kAuditSlackTol * std::max(1.0, std::abs(rhs));
}

AuditReport make_ineq_report(uint64_t n, std::string lemma, int q, int k,
                             double theta, double lhs, double rhs) {
  AuditReport r;
  r.n = n;
  r.lemma = std::move(lemma);
  r.q = q;
  r.k = k;
  r.theta = theta;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.pass = ineq_pass(lhs, rhs);
  return r;
}

}  // namespace

AuditReport audit_lemma21(const FactoredInteger& fi,
                          const DirichletCharacter& chi1,
                          const DirichletCharacter& chi2, int q,
                          const QuadratureSpec& quad) {
  if (q < 1) throw std::invalid_argument("audit_lemma21: q >= 1");
  DivisorPairTable table(fi, chi1, chi2);
  double d3 = delta3_sup(table).value;
  double estar = divisor_gaps(fi).clamped;
  double m2q = moment_2q(table, q, quad);
  double ds1 = delta_sup_over_divisors(fi, chi1);
  double ds2 = delta_sup_over_divisors(fi, chi2);
  double rhs = 4.0 * std::pow(estar, -4.0 / q) * std::pow(m2q, 1.0 / q) +
               32.0 * (ds1 * ds1 + ds2 * ds2);
  return make_ineq_report(fi.n, "2.1", q, 0, 0.0, d3 * d3, rhs);
}

AuditReport audit_lemma22(const FactoredInteger& fi,
                          const DirichletCharacter& chi, int q) {
  if (q < 1) throw std::invalid_argument("audit_lemma22: q >= 1");
  double ds = delta_sup_over_divisors(fi, chi);
  double estar = divisor_gaps(fi).clamped;
  double md = moment_2q_1d_over_divisors(fi, chi, q);
  double rhs = 4.0 * std::pow(estar, -2.0 / q) * std::pow(md, 1.0 / q) +
               4.0 * std::pow((double)fi.tau(), 1.0 / q);
  return make_ineq_report(fi.n, "2.2", q, 0, 0.0, ds * ds, rhs);
}

AuditReport audit_lemma23(const FactoredInteger& fi,
                          const DirichletCharacter& chi1,
                          const DirichletCharacter& chi2, double theta, int k,
                          int q) {
  if (q < 1 || q > 3 || k < 0 || k > 8)
    throw std::domain_error("audit_lemma23: need q in 1..3, k in 0..8");
  double lhs = delta_k_sup(fi, chi1, chi2, theta, k).value;
  lhs *= lhs;
  double ek = std::min(std::log(1.5) / (k + 1), divisor_gaps(fi).min_log_gap);
  double msum = 0.0;
  for (int j = 0; j <= k; ++j)
    msum += std::pow(moment_2q_poly(fi, chi1, chi2, theta, j, q), 1.0 / q);
  double maxtau = 0.0;
  std::vector<uint64_t> sub;
  for (uint64_t d : fi.divisors) {
    sub.clear();
    for (uint64_t e : fi.divisors)
      if (d % e == 0) sub.push_back(e);
    double t = std::abs(
        twisted_divisor_sum(std::span<const uint64_t>(sub), chi2, theta));
    maxtau = std::max(maxtau, t * t);
  }
  const double e2 = std::exp(2.0);
  double rhs = 16.0 * std::pow(ek, -3.0 / q) * msum + 64.0 * e2 * maxtau;
  return make_ineq_report(fi.n, "2.3", q, k, theta, lhs, rhs);
}

namespace {

// I_k(t) = int_{-v1}^0 (u + v1 - v2)^k e^{-iut} du by composite Gauss-Legendre
// with panel count scaled to the oscillation t*v1.
std::complex<double> window_kernel(double t, int k, double v1, double v2) {
  if (v1 <= 0) return {};
  int panels = std::max({4, k / 2, (int)std::ceil(std::abs(t) * v1 / 3.0)});
  auto xs = gauss8_nodes();
  auto ws = gauss8_weights();
  std::complex<double> total;
  double h = v1 / panels;
  for (int p = 0; p < panels; ++p) {
    double a = -v1 + p * h;
    double mid = a + 0.5 * h, half = 0.5 * h;
    std::complex<double> acc;
    for (size_t g = 0; g < xs.size(); ++g) {
      double u = mid + half * xs[g];
      double base = u + v1 - v2, pw = 1.0;
      for (int e = 0; e < k; ++e) pw *= base;
      acc += ws[g] * pw * std::complex<double>(std::cos(u * t), -std::sin(u * t));
    }
    total += acc * half;
  }
  return total;
}

}  // namespace

AuditReport audit_parseval_1d(const FactoredInteger& fi,
                              const DirichletCharacter& chi1,
                              const DirichletCharacter& chi2, double theta,
                              int k, double v1, double v2,
                              const QuadratureSpec& quad, double rel_tol) {
  if (k < 0 || k > kMaxPolyDegree)
    throw std::domain_error("audit_parseval_1d: k out of range");
  // LHS: exact u-integral of |delta_k(u, v1, v2)|^2 (Gauss per content cell).
  auto coeff = poly_window_coefficients(fi, chi1, chi2, theta);
  const auto& logs = fi.log_divisors;
  double lhs = 0.0;
  {
    std::vector<double> gn, gw;
    gauss_rule_for_degree(2 * k, gn, gw);
    struct Ev {
      double pos;
      int kind;
    };
    std::vector<Ev> ev;
    for (double l : logs) {
      ev.push_back({l - v1, 0});
      ev.push_back({l, 1});
    }
    std::sort(ev.begin(), ev.end(),
              [](const Ev& a, const Ev& b) { return a.pos < b.pos; });
    int lo = 0, hi = -1;
    for (size_t i = 0; i < ev.size(); ++i) {
      if (i > 0 && lo <= hi && ev[i].pos > ev[i - 1].pos) {
        double wlo = ev[i - 1].pos + v1 - v2, whi = ev[i].pos + v1 - v2;
        double mid = 0.5 * (wlo + whi), half = 0.5 * (whi - wlo);
        double acc = 0.0;
        for (size_t g = 0; g < gn.size(); ++g) {
          double w = mid + half * gn[g];
          std::complex<double> p;
          for (int d = lo; d <= hi; ++d) {
            double base = w - logs[d], pw = 1.0;
            for (int e = 0; e < k; ++e) pw *= base;
            p += coeff[d] * pw;
          }
          acc += gw[g] * std::norm(p);
        }
        lhs += acc * half;
      }
      if (ev[i].kind == 0)
        ++hi;
      else
        ++lo;
    }
  }

  // RHS: (1/2pi) sum over pair-pairs of kappa * B_k(delta) with
  // B_k(delta) = int_{-cutoff}^{cutoff} e^{-i t delta} |I_k(t)|^2 dt
  // plus the leading-order tail correction of the |t| > cutoff part.
  const double cutoff = quad.theta_cutoff;
  const double h = 0.02;
  int nodes = (int)std::ceil(cutoff / h);
  if (nodes % 2) ++nodes;
  std::vector<double> ik2(nodes + 1);
  for (int i = 0; i <= nodes; ++i) {
    double t = cutoff * i / nodes;
    ik2[i] = std::norm(window_kernel(t, k, v1, v2));
  }
  auto bk = [&](double delta) {
    delta = std::abs(delta);
    // Simpson over [0, cutoff] of 2 cos(delta t) |I_k(t)|^2
    double s = ik2[0] + std::cos(delta * cutoff) * ik2[nodes];
    for (int i = 1; i < nodes; ++i) {
      double t = cutoff * i / nodes;
      s += (i % 2 ? 4.0 : 2.0) * std::cos(delta * t) * ik2[i];
    }
    double quad_part = 2.0 * s * (cutoff / nodes) / 3.0;
    // leading tail: |I_k(t)|^2 ~ (A^2 + B^2 - 2AB cos(v1 t)) / t^2
    double A = 1.0, B = 1.0;
    for (int e = 0; e < k; ++e) {
      A *= v1 - v2;
      B *= -v2;
    }
    double tail = 2.0 * ((A * A + B * B) * tail_cos_over_sq(cutoff, delta) -
                         A * B * (tail_cos_over_sq(cutoff, v1 + delta) +
                                  tail_cos_over_sq(cutoff, std::abs(v1 - delta))));
    return quad_part + tail;
  };

  const auto& ds = fi.divisors;
  const int t = (int)ds.size();
  struct Pair {
    double l1;
    std::complex<double> a;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < t; ++i) {
    auto c1 = chi1.eval((int64_t)ds[i]);
    if (c1 == std::complex<double>{}) continue;
    uint64_t m = fi.n / ds[i];
    for (int j = 0; j < t; ++j) {
      if (ds[j] > m) break;
      if (m % ds[j]) continue;
      auto c2 = chi2.eval((int64_t)ds[j]);
      if (c2 == std::complex<double>{}) continue;
      double ang = theta * fi.log_divisors[j];
      pairs.push_back(
          {fi.log_divisors[i],
           c1 * c2 * std::complex<double>(std::cos(ang), std::sin(ang))});
    }
  }
  std::map<double, double> bcache;
  auto bk_cached = [&](double d) {
    d = std::abs(d);
    auto it = bcache.find(d);
    if (it != bcache.end()) return it->second;
    double v = bk(d);
    bcache.emplace(d, v);
    return v;
  };
  double rhs = 0.0;
  for (const auto& p : pairs)
    for (const auto& pp : pairs) {
      double re = (p.a * std::conj(pp.a)).real();
      if (re != 0.0) rhs += re * bk_cached(p.l1 - pp.l1);
    }
  rhs /= 2.0 * std::numbers::pi;

  // residual bound of the dropped tail terms (next order in 1/t)
  double npairs = (double)pairs.size();
  double resid = npairs * npairs *
                 (2.0 * k * (k + 1) * 2.0 / (cutoff * cutoff) +
                  (double)k * k * (k + 1) * (k + 1) / (3.0 * cutoff * cutoff * cutoff)) /
                 (2.0 * std::numbers::pi);

  AuditReport r;
  r.n = fi.n;
  r.lemma = "parseval1d";
  r.q = 0;
  r.k = k;
  r.theta = theta;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.aux = resid;
  r.pass = std::abs(lhs - rhs) <= rel_tol * std::max(1.0, std::abs(rhs)) + resid;
  return r;
}

namespace {

// G(t) = int_0^1 4 sin^2(v t / 2) / t^2 dv = (2/t^2)(1 - sin t / t);
// removable singularity at 0 handled by the Taylor series.
double g_kernel(double t) {
  double a = std::abs(t);
  if (a < 1e-4) {
    double t2 = t * t;
    return 1.0 / 3.0 - t2 / 60.0 + t2 * t2 / 2520.0 - t2 * t2 * t2 / 181440.0;
  }
  return (2.0 / (t * t)) * (1.0 - std::sin(t) / t);
}

}  // namespace

AuditReport audit_parseval_delta3(const FactoredInteger& fi,
                                  const DirichletCharacter& chi1,
                                  const DirichletCharacter& chi2,
                                  const QuadratureSpec& quad, double rel_tol) {
  DivisorPairTable table(fi, chi1, chi2);
  double lhs = moment_2q(table, 1, quad);

  const double cutoff = quad.theta_cutoff;
  // A(delta) = int_{-cutoff}^{cutoff} G(t) cos(delta t) dt + 4*tail(2/t^2 part)
  auto a_of = [&](double delta) {
    delta = std::abs(delta);
    double h = std::min(0.02, 0.25 / (1.0 + delta));
    int n = (int)std::ceil(cutoff / h);
    auto f = [delta](double t) { return g_kernel(t) * std::cos(delta * t); };
    double quad_part = 2.0 * simpson(f, 0.0, cutoff, n);
    return quad_part + 4.0 * tail_cos_over_sq(cutoff, delta);
  };
  std::map<double, double> acache;
  auto a_cached = [&](double d) {
    d = std::abs(d);
    auto it = acache.find(d);
    if (it != acache.end()) return it->second;
    double v = a_of(d);
    acache.emplace(d, v);
    return v;
  };

  const auto& logs = fi.log_divisors;
  const int t = table.tau();
  struct Pair {
    double l1, l2;
    std::complex<double> a;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j)
      if (table.pair_divides(i, j)) {
        auto e = table.entry(i, j);
        if (e != std::complex<double>{}) pairs.push_back({logs[i], logs[j], e});
      }
  double rhs = 0.0;
  for (const auto& p : pairs)
    for (const auto& pp : pairs) {
      double re = (p.a * std::conj(pp.a)).real();
      if (re != 0.0)
        rhs += re * a_cached(p.l1 - pp.l1) * a_cached(p.l2 - pp.l2);
    }
  rhs /= 4.0 * std::numbers::pi * std::numbers::pi;

  // dropped sin t / t^3 tail: |A - corrected| <= 2/cutoff^2 per axis
  double npairs = (double)pairs.size();
  double resid = npairs * npairs * 2.0 *
                 (2.0 / (cutoff * cutoff)) * (std::numbers::pi + 1.0) /
                 (4.0 * std::numbers::pi * std::numbers::pi);

  AuditReport r;
  r.n = fi.n;
  r.lemma = "parseval3";
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.aux = resid;
  r.pass = std::abs(lhs - rhs) <= rel_tol * std::max(lhs, std::abs(rhs));
  return r;
}

AuditReport audit_recurrence(const FactoredInteger& fi, uint64_t p,
                             const DirichletCharacter& chi1,
                             const DirichletCharacter& chi2, int samples,
                             uint64_t seed) {
  auto defect = recurrence_defect(fi, p, chi1, chi2, samples, seed);
  AuditReport r;
  r.n = fi.n;
  r.lemma = "recurrence";
  r.theta = (double)p;  // records the extending prime
  r.lhs = defect.shifted;
  r.rhs = 1e-9;
  r.slack = r.rhs - r.lhs;
  r.aux = defect.literal;
  r.pass = defect.shifted < 1e-9;
  return r;
}

void write_reports_csv(std::span<const AuditReport> reports, std::ostream& os) {
  os << "n,lemma,q,k,theta,lhs,rhs,slack,pass\n";
  for (const auto& r : reports) {
    os << r.n << ',' << r.lemma << ',' << r.q << ',' << r.k << ','
       << format_double(r.theta) << ',' << format_double(r.lhs) << ','
       << format_double(r.rhs) << ',' << format_double(r.slack) << ','
       << (r.pass ? 1 : 0) << '\n';
  }
}

}  // namespace deltachi
