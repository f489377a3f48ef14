#include "deltachi/moments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace deltachi {

namespace {

double sq(double x) { return x * x; }

double pow_int(double x, int q) {
  double r = 1.0;
  for (int i = 0; i < q; ++i) r *= x;
  return r;
}

// Integral of |running sum|^2 over a signed-event sweep.
double sweep_square_integral(
    std::vector<std::pair<double, std::complex<double>>>& events) {
  std::sort(events.begin(), events.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double total = 0.0;
  std::complex<double> cur;
  for (size_t i = 0; i < events.size(); ++i) {
    if (i > 0) {
      double len = events[i].first - events[i - 1].first;
      if (len > 0) total += std::norm(cur) * len;
    }
    cur += events[i].second;
  }
  return total;
}

// Pairwise log-ratios lying in (0, 1).
std::vector<double> unit_log_diffs(std::span<const double> logs) {
  std::vector<double> out;
  const int t = (int)logs.size();
  for (int i = 0; i < t; ++i)
    for (int j = i + 1; j < t && logs[j] - logs[i] < 1.0; ++j) {
      double d = logs[j] - logs[i];
      if (d > 0.0) out.push_back(d);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct AxisCell {
  double len;
  int lo, hi;  // content ranks, inclusive
};

// Nonempty-content cells of u -> {i : u < log d_i <= u + v}.
std::vector<AxisCell> axis_cells(std::span<const double> logs, double v) {
  std::vector<AxisCell> cells;
  if (v <= 0.0) return cells;
  const int t = (int)logs.size();
  struct Ev {
    double pos;
    int kind;  // 0 = entry (hi -> i), 1 = exit (lo -> i+1)
  };
  std::vector<Ev> ev;
  ev.reserve(2 * t);
  for (int i = 0; i < t; ++i) {
    ev.push_back({logs[i] - v, 0});
    ev.push_back({logs[i], 1});
  }
  std::sort(ev.begin(), ev.end(),
            [](const Ev& a, const Ev& b) { return a.pos < b.pos; });
  int lo = 0, hi = -1;
  for (size_t i = 0; i < ev.size(); ++i) {
    if (i > 0 && lo <= hi) {
      double len = ev[i].pos - ev[i - 1].pos;
      if (len > 0) cells.push_back({len, lo, hi});
    }
    if (ev[i].kind == 0)
      ++hi;
    else
      ++lo;
  }
  return cells;
}

}  // namespace

double integral_sq_u1(const DivisorPairTable& table, double u2,
                      std::array<double, 2> v) {
  const auto& logs = table.fi().log_divisors;
  auto [a2, b2] = window_ranks(logs, u2, v[1]);
  std::vector<std::pair<double, std::complex<double>>> events;
  for (int i = 0; i < table.tau(); ++i) {
    auto c = table.rect_sum(i, i, a2, b2);
    if (c == std::complex<double>{}) continue;
    events.emplace_back(logs[i] - v[0], c);
    events.emplace_back(logs[i], -c);
  }
  return sweep_square_integral(events);
}

double integral_sq_diag(const DivisorPairTable& table, double u,
                        std::array<double, 2> v) {
  const auto& logs = table.fi().log_divisors;
  const int t = table.tau();
  std::vector<std::pair<double, std::complex<double>>> events;
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j) {
      if (!table.pair_divides(i, j)) continue;
      // pair active for u1 in [log d_j - v2, log d_j) cap (u - log d_i, u - log d_i + v1]
      double a = std::max(logs[j] - v[1], u - logs[i]);
      double b = std::min(logs[j], u - logs[i] + v[0]);
      if (a < b) {
        auto c = table.entry(i, j);
        events.emplace_back(a, c);
        events.emplace_back(b, -c);
      }
    }
  return sweep_square_integral(events);
}

double sup_integral_sq_axis1(const DivisorPairTable& table) {
  const auto& logs = table.fi().log_divisors;
  auto runs = unit_window_runs(logs);
  std::vector<double> v1c = unit_log_diffs(logs);
  v1c.push_back(1.0);
  double best = 0.0;
  std::vector<std::pair<double, std::complex<double>>> events;
  std::vector<std::complex<double>> c(table.tau());
  for (const auto& run : runs) {
    for (int i = 0; i < table.tau(); ++i)
      c[i] = table.rect_sum(i, i, run.lo, run.hi);
    for (double v1 : v1c) {
      events.clear();
      for (int i = 0; i < table.tau(); ++i) {
        if (c[i] == std::complex<double>{}) continue;
        events.emplace_back(logs[i] - v1, c[i]);
        events.emplace_back(logs[i], -c[i]);
      }
      best = std::max(best, sweep_square_integral(events));
    }
  }
  return best;
}

double sup_integral_sq_diag(const DivisorPairTable& table) {
  const auto& logs = table.fi().log_divisors;
  std::vector<double> vc = unit_log_diffs(logs);
  vc.push_back(1.0);
  double best = 0.0;
  std::vector<double> uc;
  for (double v1 : vc)
    for (double v2 : vc) {
      uc.clear();
      for (double L : logs) {
        uc.push_back(L);
        uc.push_back(L - v1);
        uc.push_back(L - v2);
        uc.push_back(L - v1 - v2);
      }
      std::sort(uc.begin(), uc.end());
      uc.erase(std::unique(uc.begin(), uc.end()), uc.end());
      for (double u : uc)
        best = std::max(best, integral_sq_diag(table, u, {v1, v2}));
    }
  return best;
}

double sup_integral_sq_axis1_grid(const DivisorPairTable& table, int grid) {
  const auto& logs = table.fi().log_divisors;
  double lo = -1.05, hi = logs.back() + 0.05;
  double best = 0.0;
  for (int a = 0; a < grid; ++a) {
    double u2 = lo + (hi - lo) * a / (grid - 1);
    for (int b = 1; b <= grid; ++b)
      for (int c = 1; c <= grid; ++c)
        best = std::max(best, integral_sq_u1(table, u2,
                                             {(double)b / grid, (double)c / grid}));
  }
  return best;
}

double sup_integral_sq_diag_grid(const DivisorPairTable& table, int grid) {
  const auto& logs = table.fi().log_divisors;
  double lo = -2.1, hi = 2 * logs.back() + 0.05;
  double best = 0.0;
  for (int a = 0; a < grid; ++a) {
    double u = lo + (hi - lo) * a / (grid - 1);
    for (int b = 1; b <= grid; ++b)
      for (int c = 1; c <= grid; ++c)
        best = std::max(best, integral_sq_diag(table, u,
                                               {(double)b / grid, (double)c / grid}));
  }
  return best;
}

namespace {

// Simpson node/weight list over [0,1] split at the given interior kinks
// (1 panel per piece, exact for integrands polynomial of degree <= 3 there).
std::vector<std::pair<double, double>> v_axis_nodes(std::span<const double> kinks,
                                                    bool plain, int panels) {
  std::vector<std::pair<double, double>> nw;
  if (plain) {
    int n = std::max(2, panels);
    if (n % 2) ++n;
    double h = 1.0 / n;
    for (int i = 0; i <= n; ++i) {
      double w = (i == 0 || i == n) ? h / 3 : (i % 2 ? 4 * h / 3 : 2 * h / 3);
      nw.emplace_back(i * h, w);
    }
    return nw;
  }
  std::vector<double> pts{0.0, 1.0};
  for (double x : kinks)
    if (x > 0.0 && x < 1.0) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double a = pts[i], b = pts[i + 1], h = b - a;
    nw.emplace_back(a, h / 6);
    nw.emplace_back(0.5 * (a + b), 4 * h / 6);
    nw.emplace_back(b, h / 6);
  }
  return nw;
}

}  // namespace

double moment_2q(const DivisorPairTable& table, int q, const QuadratureSpec& quad) {
  if (q < 1) throw std::invalid_argument("moment_2q: q must be >= 1");
  const auto& logs = table.fi().log_divisors;
  auto kinks = unit_log_diffs(logs);
  auto nw = v_axis_nodes(kinks,
                         quad.scheme == QuadratureSpec::Scheme::simpson_plain,
                         quad.panels);
  // cells per distinct node value (both axes share the divisor logs)
  std::map<double, std::vector<AxisCell>> cell_cache;
  for (const auto& [v, w] : nw) {
    (void)w;
    if (!cell_cache.count(v)) cell_cache[v] = axis_cells(logs, v);
  }
  double total = 0.0;
  for (const auto& [v1, w1] : nw) {
    const auto& cells1 = cell_cache[v1];
    if (cells1.empty()) continue;
    for (const auto& [v2, w2] : nw) {
      const auto& cells2 = cell_cache[v2];
      double val = 0.0;
      for (const auto& c1 : cells1)
        for (const auto& c2 : cells2) {
          double m2 = std::norm(table.rect_sum(c1.lo, c1.hi, c2.lo, c2.hi));
          if (m2 > 0) val += pow_int(m2, q) * c1.len * c2.len;
        }
      total += w1 * w2 * val;
    }
  }
  return total;
}

double moment_2q_1d(std::span<const uint64_t> divisors,
                    const DirichletCharacter& chi, int q) {
  if (q < 1) throw std::invalid_argument("moment_2q_1d: q must be >= 1");
  const int t = (int)divisors.size();
  std::vector<double> logs(t);
  std::vector<std::complex<double>> prefix(t + 1);
  for (int i = 0; i < t; ++i) {
    logs[i] = std::log((double)divisors[i]);
    prefix[i + 1] = prefix[i] + chi.eval((int64_t)divisors[i]);
  }
  auto kinks = unit_log_diffs(logs);
  auto nw = v_axis_nodes(kinks, false, 0);
  double total = 0.0;
  for (const auto& [v, w] : nw) {
    auto cells = axis_cells(logs, v);
    double val = 0.0;
    for (const auto& c : cells) {
      double m2 = std::norm(prefix[c.hi + 1] - prefix[c.lo]);
      if (m2 > 0) val += pow_int(m2, q) * c.len;
    }
    total += w * val;
  }
  return total;
}

double moment_2q_1d_over_divisors(const FactoredInteger& fi,
                                  const DirichletCharacter& chi, int q) {
  double total = 0.0;
  std::vector<uint64_t> sub;
  for (uint64_t d : fi.divisors) {
    sub.clear();
    for (uint64_t e : fi.divisors)
      if (d % e == 0) sub.push_back(e);
    total += moment_2q_1d(std::span<const uint64_t>(sub), chi, q);
  }
  return total;
}

double moment_2q_poly(const FactoredInteger& fi, const DirichletCharacter& chi1,
                      const DirichletCharacter& chi2, double theta, int k, int q) {
  if (q < 1 || k < 0 || k * q > 31)
    throw std::domain_error("moment_2q_poly: need q >= 1, k >= 0, k*q <= 31");
  auto coeff = poly_window_coefficients(fi, chi1, chi2, theta);
  const auto& logs = fi.log_divisors;

  std::vector<double> gw_nodes, gw_weights;   // w-integral, degree 2kq
  gauss_rule_for_degree(2 * k * q, gw_nodes, gw_weights);
  std::vector<double> gv_nodes, gv_weights;   // v-integrals, degree 2kq+1
  gauss_rule_for_degree(2 * k * q + 1, gv_nodes, gv_weights);

  auto kinks = unit_log_diffs(logs);
  std::vector<double> pts{0.0, 1.0};
  for (double x : kinks) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // For fixed v1 we need the u-cells along with their endpoints.
  struct UCell {
    double ulo, uhi;
    int lo, hi;
  };
  auto u_cells_at = [&](double v1) {
    std::vector<UCell> cells;
    if (v1 <= 0) return cells;
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
      if (i > 0 && lo <= hi && ev[i].pos > ev[i - 1].pos)
        cells.push_back({ev[i - 1].pos, ev[i].pos, lo, hi});
      if (ev[i].kind == 0)
        ++hi;
      else
        ++lo;
    }
    return cells;
  };

  auto poly_sq_q = [&](int lo, int hi, double w) {
    std::complex<double> p;
    for (int i = lo; i <= hi; ++i) {
      double base = w - logs[i], pw = 1.0;
      for (int e = 0; e < k; ++e) pw *= base;
      p += coeff[i] * pw;
    }
    return pow_int(std::norm(p), q);
  };

  double total = 0.0;
  for (size_t piece = 0; piece + 1 < pts.size(); ++piece) {
    double a = pts[piece], b = pts[piece + 1];
    double pmid = 0.5 * (a + b), phalf = 0.5 * (b - a);
    for (size_t gv1 = 0; gv1 < gv_nodes.size(); ++gv1) {
      double v1 = pmid + phalf * gv_nodes[gv1];
      auto cells = u_cells_at(v1);
      double iv1 = 0.0;  // int over v2 of I(v1, v2)
      for (size_t gv2 = 0; gv2 < gv_nodes.size(); ++gv2) {
        double v2 = 0.5 + 0.5 * gv_nodes[gv2];
        double shift = v1 - v2;
        double iu = 0.0;
        for (const auto& c : cells) {
          double wlo = c.ulo + shift, whi = c.uhi + shift;
          double mid = 0.5 * (wlo + whi), half = 0.5 * (whi - wlo);
          double acc = 0.0;
          for (size_t g = 0; g < gw_nodes.size(); ++g)
            acc += gw_weights[g] * poly_sq_q(c.lo, c.hi, mid + half * gw_nodes[g]);
          iu += acc * half;
        }
        iv1 += 0.5 * gv_weights[gv2] * iu;
      }
      total += phalf * gv_weights[gv1] * iv1;
    }
  }
  return total;
}

namespace {

// 2 * int_0^cutoff cos(delta t)/(1+t^2) dt by composite Simpson.
double cauchy_weight_integral(double cutoff, double delta) {
  delta = std::abs(delta);
  double h = std::min(0.02, 0.25 / (1.0 + delta));
  int n = (int)std::ceil(cutoff / h);
  auto f = [delta](double t) { return std::cos(delta * t) / (1.0 + t * t); };
  return 2.0 * simpson(f, 0.0, cutoff, n);
}

struct WCache {
  double cutoff;
  std::map<double, double> vals;
  double operator()(double delta) {
    delta = std::abs(delta);
    auto it = vals.find(delta);
    if (it != vals.end()) return it->second;
    double v = cauchy_weight_integral(cutoff, delta);
    vals.emplace(delta, v);
    return v;
  }
};

double cauchy_tail_mass(double cutoff) {
  return std::numbers::pi - 2.0 * std::atan(cutoff);
}

}  // namespace

WeightedMoment cauchy_moment_pair(const FactoredInteger& fi,
                                  const DirichletCharacter& chi1,
                                  const DirichletCharacter& chi2, double theta,
                                  const QuadratureSpec& quad) {
  if (quad.theta_cutoff < 10.0)
    throw std::invalid_argument("cauchy_moment_pair: theta_cutoff >= 10");
  // |tau(n, chi, t, theta)|^2 = sum_{i,i'} c_i conj(c_{i'}) e^{i t (l_i - l_i')}
  // with c_i the per-divisor inner sums; integrate termwise.
  auto c = poly_window_coefficients(fi, chi1, chi2, theta);
  const auto& logs = fi.log_divisors;
  WCache W{quad.theta_cutoff, {}};
  double value = 0.0;
  const int t = (int)c.size();
  for (int i = 0; i < t; ++i) {
    if (c[i] == std::complex<double>{}) continue;
    value += std::norm(c[i]) * W(0.0);
    for (int j = i + 1; j < t; ++j) {
      if (c[j] == std::complex<double>{}) continue;
      double re = (c[i] * std::conj(c[j])).real();
      if (re != 0.0) value += 2.0 * re * W(logs[i] - logs[j]);
      double im = (c[i] * std::conj(c[j])).imag();
      // imaginary parts cancel between (i,j) and (j,i): W is even
      (void)im;
    }
  }
  double bound = (double)fi.tau3 * (double)fi.tau3;
  return {value, bound * cauchy_tail_mass(quad.theta_cutoff)};
}

WeightedMoment cauchy_moment_pair2(const FactoredInteger& fi,
                                   const DirichletCharacter& chi1,
                                   const DirichletCharacter& chi2,
                                   const QuadratureSpec& quad) {
  if (quad.theta_cutoff < 10.0)
    throw std::invalid_argument("cauchy_moment_pair2: theta_cutoff >= 10");
  const auto& ds = fi.divisors;
  const auto& logs = fi.log_divisors;
  const int t = (int)ds.size();
  struct Pair {
    double l1, l2;
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
      pairs.push_back({logs[i], logs[j], c1 * c2});
    }
  }
  WCache W{quad.theta_cutoff, {}};
  double value = 0.0;
  for (const auto& p : pairs)
    for (const auto& pp : pairs) {
      double re = (p.a * std::conj(pp.a)).real();
      if (re != 0.0) value += re * W(p.l1 - pp.l1) * W(p.l2 - pp.l2);
    }
  double bound = (double)fi.tau3 * (double)fi.tau3;
  double tail = bound * 2.0 * cauchy_tail_mass(quad.theta_cutoff) * std::numbers::pi;
  return {value, tail};
}

WeightedMoment cauchy_moment_divisors(const FactoredInteger& fi,
                                      const DirichletCharacter& chi, int q,
                                      const QuadratureSpec& quad) {
  if (q < 1) throw std::invalid_argument("cauchy_moment_divisors: q >= 1");
  if (quad.theta_cutoff < 10.0)
    throw std::invalid_argument("cauchy_moment_divisors: theta_cutoff >= 10");
  WCache W{quad.theta_cutoff, {}};
  double sum = 0.0;
  std::vector<uint64_t> sub;
  std::vector<double> sublogs;
  for (uint64_t d : fi.divisors) {
    sub.clear();
    sublogs.clear();
    for (size_t i = 0; i < fi.divisors.size(); ++i)
      if (d % fi.divisors[i] == 0) {
        sub.push_back(fi.divisors[i]);
        sublogs.push_back(fi.log_divisors[i]);
      }
    double vd = 0.0;
    for (size_t i = 0; i < sub.size(); ++i) {
      auto ci = chi.eval((int64_t)sub[i]);
      if (ci == std::complex<double>{}) continue;
      vd += W(0.0);
      for (size_t j = i + 1; j < sub.size(); ++j) {
        auto cj = chi.eval((int64_t)sub[j]);
        if (cj == std::complex<double>{}) continue;
        double re = (ci * std::conj(cj)).real();
        if (re != 0.0) vd += 2.0 * re * W(sublogs[i] - sublogs[j]);
      }
    }
    sum += pow_int(std::max(0.0, vd), q);
  }
  double tau_n = (double)fi.tau();
  double per_axis = sq(tau_n) * cauchy_tail_mass(quad.theta_cutoff);
  return {std::pow(sum, 1.0 / q), per_axis};
}

}  // namespace deltachi
