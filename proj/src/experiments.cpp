#include "deltachi/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "deltachi/constants.hpp"
#include "deltachi/io.hpp"

namespace deltachi {

namespace {

// Neumaier-compensated accumulator; fixed accumulation order keeps scans
// bit-identical across thread counts.
struct Kahan {
  double s = 0.0, c = 0.0;
  void add(double v) {
    double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  double get() const { return s + c; }
};

uint64_t mix64(uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdull;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ull;
  x ^= x >> 33;
  return x;
}

}  // namespace

std::string canonical_config_json(const MomentScanConfig& cfg) {
  nlohmann::json j;
  j["x_grid"] = cfg.x_grid;
  j["chi1"] = cfg.chi1_spec;
  j["chi2"] = cfg.chi2_spec;
  j["y"] = cfg.y;
  j["coprime_to"] = cfg.coprime_to;
  j["squarefree_only"] = cfg.squarefree_only;
  j["oracle_fraction"] = cfg.oracle_fraction;
  j["seed"] = cfg.seed;
  j["block_size"] = cfg.block_size;
  j["allow_principal"] = cfg.allow_principal;
  // threads intentionally omitted: the result must not depend on it
  return j.dump();
}

std::string config_hash(const MomentScanConfig& cfg) {
  return fnv1a_hex(canonical_config_json(cfg));
}

MomentSeries moment_scan(const FactorSieve& sieve, const MomentScanConfig& cfg) {
  if (cfg.x_grid.empty()) throw std::invalid_argument("moment_scan: empty x_grid");
  for (size_t i = 1; i < cfg.x_grid.size(); ++i)
    if (cfg.x_grid[i] <= cfg.x_grid[i - 1])
      throw std::invalid_argument("moment_scan: x_grid must be increasing");
  const uint64_t xmax = cfg.x_grid.back();
  if (xmax > sieve.limit)
    throw std::invalid_argument("moment_scan: x_grid exceeds sieve limit");
  if (cfg.oracle_fraction < 0.0 || cfg.oracle_fraction > 1.0)
    throw std::invalid_argument("moment_scan: oracle_fraction outside [0,1]");

  DirichletCharacter chi1 = parse_char_spec(cfg.chi1_spec);
  DirichletCharacter chi2 = parse_char_spec(cfg.chi2_spec);
  if (!cfg.allow_principal && (chi1.is_principal() || chi2.is_principal()))
    throw std::invalid_argument(
        "moment_scan: principal character requires allow_principal");

  WeightSpec ws;
  ws.y = cfg.y;
  ws.squarefree_only = cfg.squarefree_only;
  ws.coprime_to = cfg.coprime_to
                      ? cfg.coprime_to
                      : (uint64_t)chi1.conductor() * chi2.conductor();

  // Block layout: block_size chunks additionally cut at every checkpoint.
  struct Block {
    uint64_t lo, hi;  // inclusive n range
    int checkpoint = -1;
  };
  std::vector<Block> blocks;
  {
    uint64_t pos = 1;
    size_t ci = 0;
    while (pos <= xmax) {
      uint64_t end = std::min(xmax, pos + cfg.block_size - 1);
      while (ci < cfg.x_grid.size() && cfg.x_grid[ci] < pos) ++ci;
      if (ci < cfg.x_grid.size() && cfg.x_grid[ci] <= end) end = cfg.x_grid[ci];
      Block b{pos, end, -1};
      if (ci < cfg.x_grid.size() && end == cfg.x_grid[ci]) b.checkpoint = (int)ci;
      blocks.push_back(b);
      pos = end + 1;
    }
  }

  struct BlockOut {
    Kahan sum;
    uint64_t processed = 0, oracled = 0;
  };
  std::vector<BlockOut> outs(blocks.size());
  std::atomic<size_t> next{0};
  std::mutex fail_mutex;
  std::vector<uint64_t> mismatches;

  const uint64_t oracle_threshold =
      cfg.oracle_fraction >= 1.0
          ? ~0ull
          : (uint64_t)(cfg.oracle_fraction * 18446744073709551615.0);

  auto worker = [&]() {
    for (;;) {
      size_t bi = next.fetch_add(1);
      if (bi >= blocks.size()) return;
      const Block& b = blocks[bi];
      BlockOut& out = outs[bi];
      for (uint64_t n = b.lo; n <= b.hi; ++n) {
        FactoredInteger fi = factorize(sieve, n);
        double w = weight(ws, fi);
        if (w == 0.0) continue;
        SupResult sup = delta3_sup(fi, chi1, chi2);
        out.sum.add(w * sup.value * sup.value);
        ++out.processed;
        if (cfg.oracle_fraction > 0.0 &&
            mix64(n ^ mix64(cfg.seed)) <= oracle_threshold && fi.tau() <= 96) {
          SupResult ref = delta3_sup_bruteforce(fi, chi1, chi2);
          ++out.oracled;
          bool same = std::abs(ref.value - sup.value) <= 1e-9 &&
                      ref.run1 == sup.run1 && ref.run2 == sup.run2;
          if (!same) {
            std::lock_guard<std::mutex> lk(fail_mutex);
            mismatches.push_back(n);
          }
        }
      }
    }
  };

  auto t0 = std::chrono::steady_clock::now();
  int nthreads = std::max(1, cfg.threads);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (!mismatches.empty())
    throw std::runtime_error("moment_scan: oracle mismatch at n=" +
                             std::to_string(mismatches.front()));

  MomentSeries series;
  series.config_json = canonical_config_json(cfg);
  series.config_hash = fnv1a_hex(series.config_json);
  auto params = exponent_params(cfg.y, std::max(chi1.order(), 1));
  series.pair_product_principal = product(chi1, conjugate(chi2)).is_principal();
  series.e_lower = series.pair_product_principal
                       ? params.lower_exponent_equal()
                       : params.lower_exponent_distinct();
  series.e_upper = params.upper_moment_exponent();

  Kahan total;
  uint64_t processed = 0, oracled = 0;
  for (size_t bi = 0; bi < blocks.size(); ++bi) {
    total.add(outs[bi].sum.get());
    processed += outs[bi].processed;
    oracled += outs[bi].oracled;
    if (blocks[bi].checkpoint >= 0) {
      MomentRow row;
      row.x = blocks[bi].hi;
      row.S = total.get();
      row.S_over_x = row.S / (double)row.x;
      double lx = std::log((double)row.x);
      row.norm_lower = lx > 0 ? row.S / ((double)row.x * std::pow(lx, series.e_lower))
                              : std::nan("");
      row.norm_upper = lx > 0 ? row.S / ((double)row.x * std::pow(lx, series.e_upper))
                              : std::nan("");
      row.n_processed = processed;
      row.oracle_checked = oracled;
      series.rows.push_back(row);
    }
  }
  series.n_processed = processed;
  series.oracle_checked = oracled;
  series.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return series;
}

FitResult fit_exponent(const MomentSeries& series, const std::string& model) {
  std::vector<double> xs, ys;
  for (const auto& r : series.rows) {
    if (r.x < 16) continue;
    if (model == "loglog") {
      xs.push_back(std::log(std::log((double)r.x)));
      ys.push_back(std::log(r.S_over_x));
    } else if (model == "log-linear") {
      xs.push_back(std::log((double)r.x));
      ys.push_back(r.S_over_x);
    } else {
      throw std::invalid_argument("fit_exponent: unknown model " + model);
    }
  }
  const size_t n = xs.size();
  if (n < 4) throw std::invalid_argument("fit_exponent: need >= 4 rows with x >= 16");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::runtime_error("fit_exponent: degenerate design");
  FitResult fr;
  fr.model = model;
  fr.slope = (n * sxy - sx * sy) / denom;
  fr.intercept = (sy - fr.slope * sx) / n;
  double ss_res = 0, ss_tot = 0, ybar = sy / n;
  fr.residuals.resize(n);
  for (size_t i = 0; i < n; ++i) {
    double pred = fr.intercept + fr.slope * xs[i];
    fr.residuals[i] = ys[i] - pred;
    ss_res += fr.residuals[i] * fr.residuals[i];
    ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
  }
  fr.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fr;
}

ContrastResult contrast_principal_case(const FactorSieve& sieve,
                                       const std::vector<uint64_t>& x_grid,
                                       const std::string& chi_spec,
                                       const std::string& chi_alt_spec, double y,
                                       int threads, double oracle_fraction,
                                       uint64_t seed) {
  DirichletCharacter chi = parse_char_spec(chi_spec);
  DirichletCharacter alt = parse_char_spec(chi_alt_spec);
  if (chi.is_principal())
    throw std::invalid_argument("contrast: chi must be non-principal");
  if (product(chi, conjugate(alt)).is_principal())
    throw std::invalid_argument("contrast: chi * conj(chi_alt) must be non-principal");

  MomentScanConfig cfg;
  cfg.x_grid = x_grid;
  cfg.y = y;
  cfg.threads = threads;
  cfg.oracle_fraction = oracle_fraction;
  cfg.seed = seed;

  ContrastResult out;
  cfg.chi1_spec = chi_spec;
  cfg.chi2_spec = chi_spec;
  out.equal_pair = moment_scan(sieve, cfg);
  cfg.chi2_spec = chi_alt_spec;
  out.distinct_pair = moment_scan(sieve, cfg);
  out.ratio.resize(x_grid.size());
  for (size_t i = 0; i < x_grid.size(); ++i)
    out.ratio[i] = out.equal_pair.rows[i].S / out.distinct_pair.rows[i].S;
  return out;
}

std::optional<double> lemma51_log_ratio(const FactoredInteger& fi,
                                        const DirichletCharacter& chi,
                                        double theta1, double theta2) {
  double f = std::norm(twisted_pair_sum(fi, chi, chi, theta1, theta2));
  double g = std::norm(twisted_pair_sum(fi, chi, chi, theta1, theta1));
  if (f < 1e-30 || g < 1e-30) return std::nullopt;
  return std::abs(std::log(f / g));
}

RatioSweep lemma51_sweep(const FactorSieve& sieve, const DirichletCharacter& chi,
                         double theta1, uint64_t x, double delta_coeff) {
  RatioSweep out;
  out.theta2 = theta1 + delta_coeff / std::log((double)x);
  for (uint64_t n = 1; n <= x; ++n) {
    FactoredInteger fi = factorize(sieve, n);
    if (!fi.squarefree) continue;
    if (std::gcd(fi.n, (uint64_t)chi.modulus()) != 1) continue;
    auto r = lemma51_log_ratio(fi, chi, theta1, out.theta2);
    ++out.samples;
    if (!r) {
      ++out.excluded;
      continue;
    }
    out.max_log_ratio = std::max(out.max_log_ratio, *r);
  }
  return out;
}

void write_series_csv(const MomentSeries& series, std::ostream& os) {
  os << "x,S,S_over_x,norm_lower,norm_upper,n_processed,oracle_checked\n";
  for (const auto& r : series.rows) {
    os << r.x << ',' << format_double(r.S) << ',' << format_double(r.S_over_x)
       << ',' << format_double(r.norm_lower) << ','
       << format_double(r.norm_upper) << ',' << r.n_processed << ','
       << r.oracle_checked << '\n';
  }
}

std::string series_to_json(const MomentSeries& series) {
  nlohmann::json meta;
  meta["config"] = nlohmann::json::parse(series.config_json);
  meta["config_hash"] = series.config_hash;
  meta["e_lower"] = series.e_lower;
  meta["e_upper"] = series.e_upper;
  meta["pair_product_principal"] = series.pair_product_principal;
  meta["n_processed"] = series.n_processed;
  meta["oracle_checked"] = series.oracle_checked;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : series.rows) {
    nlohmann::json row;
    row["x"] = r.x;
    row["S"] = r.S;
    row["S_over_x"] = r.S_over_x;
    row["norm_lower"] = r.norm_lower;
    row["norm_upper"] = r.norm_upper;
    row["n_processed"] = r.n_processed;
    row["oracle_checked"] = r.oracle_checked;
    rows.push_back(row);
  }
  nlohmann::json j;
  j["meta"] = meta;
  j["rows"] = rows;
  return j.dump(2);
}

void export_series(const MomentSeries& series, const std::string& path,
                   ExportFormat format) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("export_series: cannot open " + path);
  if (format == ExportFormat::csv)
    write_series_csv(series, os);
  else
    os << series_to_json(series) << '\n';
  if (!os) throw std::runtime_error("export_series: write failed for " + path);
}

}  // namespace deltachi
