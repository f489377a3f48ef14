// deltachi: character-twisted divisor-concentration toolkit.
//
// Subcommands: constants, delta3, delta, deltak, scan, contrast, audit,
// primes.  Exit codes: 0 success, 1 audit failure, 2 configuration error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

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

std::vector<uint64_t> make_grid(const std::string& grid, uint64_t xmax) {
  std::vector<uint64_t> xs;
  if (grid == "pow2") {
    for (uint64_t x = 1024; x <= xmax; x *= 2) xs.push_back(x);
    if (xs.empty() || xs.back() != xmax) xs.push_back(xmax);
  } else {
    std::stringstream ss{grid};
    std::string tok;
    while (std::getline(ss, tok, ',')) xs.push_back(std::stoull(tok));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  }
  if (xs.empty()) throw std::invalid_argument("empty x grid");
  return xs;
}

void print_sup(const SupResult& r) {
  std::cout << "value=" << format_double(r.value) << "\n";
  std::cout << "witness u=(" << format_double(r.arg_u[0]) << ","
            << format_double(r.arg_u[1]) << ") v=(" << format_double(r.arg_v[0])
            << "," << format_double(r.arg_v[1]) << ")\n";
  std::cout << "runs [" << r.run1.lo << ".." << r.run1.hi << "] x ["
            << r.run2.lo << ".." << r.run2.hi << "]\n";
}

struct AuditArgs {
  std::string lemma;
  uint64_t nmax = 2000;
  std::string chi1 = "3:1", chi2 = "5:1";
  int q = 2, k = 0;
  double theta = 0.0, v1 = 1.0, v2 = 1.0;
  int panels = 512;
  double theta_cutoff = 200.0;
  uint64_t seed = 12345;
  int samples = 1000;
  int pairs = 50;
  double delta_coeff = 0.05;
  uint64_t xmax = 10000;
  std::string out;
  uint64_t max_sieve_bytes = (uint64_t)1 << 31;
  int threads = 1;
};

int run_audit(const AuditArgs& a) {
  QuadratureSpec quad;
  quad.panels = a.panels;
  quad.theta_cutoff = a.theta_cutoff;

  DirichletCharacter chi1 = parse_char_spec(a.chi1);
  DirichletCharacter chi2 = parse_char_spec(a.chi2);
  uint64_t coprime = (uint64_t)chi1.conductor() * chi2.conductor();

  std::vector<AuditReport> reports;
  auto sweep_n = [&](auto&& fn) {
    FactorSieve sieve = build_sieve((uint32_t)std::max<uint64_t>(a.nmax, 2),
                                    a.max_sieve_bytes);
    for (uint64_t n = 1; n <= a.nmax; ++n) {
      FactoredInteger fi = factorize(sieve, n);
      if (!fi.squarefree) continue;
      if (std::gcd(n, coprime) != 1) continue;
      reports.push_back(fn(fi));
    }
  };

  if (a.lemma == "2.1") {
    sweep_n([&](const FactoredInteger& fi) {
      return audit_lemma21(fi, chi1, chi2, a.q, quad);
    });
  } else if (a.lemma == "2.2") {
    coprime = chi1.conductor();
    sweep_n([&](const FactoredInteger& fi) {
      return audit_lemma22(fi, chi1, a.q);
    });
  } else if (a.lemma == "2.3") {
    sweep_n([&](const FactoredInteger& fi) {
      return audit_lemma23(fi, chi1, chi2, a.theta, a.k, a.q);
    });
  } else if (a.lemma == "parseval1d") {
    sweep_n([&](const FactoredInteger& fi) {
      return audit_parseval_1d(fi, chi1, chi2, a.theta, a.k, a.v1, a.v2, quad,
                               a.k == 0 ? 1e-3 : 1e-2);
    });
  } else if (a.lemma == "parseval3") {
    sweep_n([&](const FactoredInteger& fi) {
      return audit_parseval_delta3(fi, chi1, chi2, quad);
    });
  } else if (a.lemma == "recurrence") {
    FactorSieve sieve = build_sieve((uint32_t)std::max<uint64_t>(a.nmax, 100),
                                    a.max_sieve_bytes);
    uint64_t state = a.seed;
    auto next = [&state]() {
      state += 0x9e3779b97f4a7c15ull;
      uint64_t z = state;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      return z ^ (z >> 31);
    };
    const uint64_t kSmallPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
    for (int i = 0; i < a.pairs; ++i) {
      uint64_t n = 1 + next() % a.nmax;
      uint64_t p = kSmallPrimes[next() % 10];
      while (n % p == 0) n /= p;
      if (n == 0) n = 1;
      FactoredInteger fi = factorize(sieve, n);
      reports.push_back(
          audit_recurrence(fi, p, chi1, chi2, a.samples, next()));
    }
  } else if (a.lemma == "lemma51") {
    FactorSieve sieve = build_sieve((uint32_t)std::max<uint64_t>(a.xmax, 2),
                                    a.max_sieve_bytes);
    auto sweep = lemma51_sweep(sieve, chi1, a.theta, a.xmax, a.delta_coeff);
    std::cout << "max_log_ratio=" << format_double(sweep.max_log_ratio)
              << " samples=" << sweep.samples << " excluded=" << sweep.excluded
              << " theta2=" << format_double(sweep.theta2) << "\n";
    AuditReport r;
    r.n = a.xmax;
    r.lemma = "lemma51";
    r.theta = a.theta;
    r.lhs = sweep.max_log_ratio;
    r.rhs = sweep.max_log_ratio;
    r.pass = std::isfinite(sweep.max_log_ratio);
    reports.push_back(r);
  } else {
    throw std::invalid_argument("unknown audit lemma \"" + a.lemma + "\"");
  }

  size_t failures = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  for (const auto& r : reports) {
    if (!r.pass) ++failures;
    min_slack = std::min(min_slack, r.slack);
  }
  if (!a.out.empty()) {
    std::ofstream os(a.out, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open output file " + a.out);
    write_reports_csv(reports, os);
  } else {
    write_reports_csv(reports, std::cout);
  }
  std::cerr << "audit " << a.lemma << ": " << reports.size() << " reports, "
            << failures << " failures, min slack " << format_double(min_slack)
            << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"character-twisted divisor concentration toolkit"};
  app.require_subcommand(1);

  // constants
  auto* c_const = app.add_subcommand("constants", "print rho, kappa table, exponents");
  double y = 1.0;
  int panels = 4096, rmax = 8;
  c_const->add_option("--y", y, "weight parameter y");
  c_const->add_option("--panels", panels, "quadrature panels per smooth piece");
  c_const->add_option("--rmax", rmax, "print kappa(r) for r = 1..rmax");

  // delta3 / delta / deltak
  auto* c_d3 = app.add_subcommand("delta3", "two-window sup for one n");
  uint64_t arg_n = 1;
  std::string chi1_spec = "1:0", chi2_spec = "1:0", chi_spec = "1:0";
  uint64_t max_sieve_bytes = (uint64_t)1 << 31;
  c_d3->add_option("n", arg_n, "integer to evaluate")->required();
  c_d3->add_option("--chi1", chi1_spec, "first character spec q:index");
  c_d3->add_option("--chi2", chi2_spec, "second character spec q:index");
  c_d3->add_option("--max-sieve-bytes", max_sieve_bytes, "sieve memory budget");

  auto* c_d1 = app.add_subcommand("delta", "one-window sup for one n");
  c_d1->add_option("n", arg_n, "integer to evaluate")->required();
  c_d1->add_option("--chi", chi_spec, "character spec q:index");
  c_d1->add_option("--max-sieve-bytes", max_sieve_bytes, "sieve memory budget");

  auto* c_dk = app.add_subcommand("deltak", "polynomially weighted sup for one n");
  int arg_k = 1;
  double arg_theta = 0.0;
  c_dk->add_option("n", arg_n, "integer to evaluate")->required();
  c_dk->add_option("--chi1", chi1_spec, "first character spec q:index");
  c_dk->add_option("--chi2", chi2_spec, "second character spec q:index");
  c_dk->add_option("--k", arg_k, "polynomial weight degree");
  c_dk->add_option("--theta", arg_theta, "phase on the second divisor");
  c_dk->add_option("--max-sieve-bytes", max_sieve_bytes, "sieve memory budget");

  // scan
  auto* c_scan = app.add_subcommand("scan", "moment scan S(x) with exponent fit");
  MomentScanConfig scan_cfg;
  uint64_t xmax = 1 << 20;
  std::string grid = "pow2", out, format = "csv";
  c_scan->add_option("--chi1", scan_cfg.chi1_spec, "first character spec");
  c_scan->add_option("--chi2", scan_cfg.chi2_spec, "second character spec");
  c_scan->add_option("--y", scan_cfg.y, "weight parameter y");
  c_scan->add_option("--xmax", xmax, "largest checkpoint");
  c_scan->add_option("--grid", grid, "pow2 or comma-separated checkpoints");
  c_scan->add_option("--threads", scan_cfg.threads, "worker threads");
  c_scan->add_option("--oracle-fraction", scan_cfg.oracle_fraction,
                     "fraction of n re-verified by brute force");
  c_scan->add_option("--seed", scan_cfg.seed, "seed for oracle sampling");
  c_scan->add_option("--coprime-to", scan_cfg.coprime_to,
                     "coprimality gate (0 = conductor product)");
  c_scan->add_flag("--allow-principal", scan_cfg.allow_principal,
                   "permit principal characters");
  c_scan->add_option("--out", out, "output path (default stdout)");
  c_scan->add_option("--format", format, "csv or json");
  c_scan->add_option("--max-sieve-bytes", max_sieve_bytes, "sieve memory budget");

  // contrast
  auto* c_con = app.add_subcommand("contrast", "equal-pair vs distinct-pair scan");
  std::string con_chi = "3:1", con_alt = "5:1";
  int con_threads = 1;
  c_con->add_option("--chi", con_chi, "base character spec");
  c_con->add_option("--chi2", con_alt, "distinct partner character spec");
  c_con->add_option("--y", y, "weight parameter y");
  c_con->add_option("--xmax", xmax, "largest checkpoint");
  c_con->add_option("--grid", grid, "pow2 or comma-separated checkpoints");
  c_con->add_option("--threads", con_threads, "worker threads");
  c_con->add_option("--out", out, "output path (default stdout)");
  c_con->add_option("--max-sieve-bytes", max_sieve_bytes, "sieve memory budget");

  // audit
  auto* c_audit = app.add_subcommand("audit", "run a numerical audit sweep");
  AuditArgs audit;
  c_audit->add_option("lemma", audit.lemma,
                      "2.1 | 2.2 | 2.3 | parseval1d | parseval3 | recurrence | lemma51")
      ->required();
  c_audit->add_option("--nmax", audit.nmax, "sweep bound on n");
  c_audit->add_option("--chi1", audit.chi1, "first character spec");
  c_audit->add_option("--chi2", audit.chi2, "second character spec");
  c_audit->add_option("--q", audit.q, "moment exponent q");
  c_audit->add_option("--k", audit.k, "polynomial weight degree");
  c_audit->add_option("--theta", audit.theta, "phase parameter");
  c_audit->add_option("--v1", audit.v1, "first window length (parseval1d)");
  c_audit->add_option("--v2", audit.v2, "second window length (parseval1d)");
  c_audit->add_option("--panels", audit.panels, "quadrature panels");
  c_audit->add_option("--theta-cutoff", audit.theta_cutoff, "tail truncation");
  c_audit->add_option("--seed", audit.seed, "sampling seed");
  c_audit->add_option("--samples", audit.samples, "samples per recurrence pair");
  c_audit->add_option("--pairs", audit.pairs, "number of (n, p) pairs");
  c_audit->add_option("--delta-coeff", audit.delta_coeff,
                      "theta2 = theta + coeff/log x (lemma51)");
  c_audit->add_option("--xmax", audit.xmax, "sweep bound (lemma51)");
  c_audit->add_option("--out", audit.out, "CSV output path (default stdout)");
  c_audit->add_option("--threads", audit.threads, "worker threads");
  c_audit->add_option("--max-sieve-bytes", audit.max_sieve_bytes,
                      "sieve memory budget");

  // primes
  auto* c_pr = app.add_subcommand("primes", "prime-average equidistribution");
  uint64_t pr_x = 10000000;
  std::string pr_chi = "3:1";
  double pr_theta = 0.0;
  c_pr->add_option("--x", pr_x, "prime bound");
  c_pr->add_option("--chi", pr_chi, "character spec q:index");
  c_pr->add_option("--theta", pr_theta, "phase parameter");
  c_pr->add_option("--max-sieve-bytes", max_sieve_bytes, "sieve memory budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << app.help() << "\n";
    return 2;
  }

  try {
    if (c_const->parsed()) {
      auto rq = rho_by_quadrature(panels);
      std::cout << "rho=" << format_double(rq.value)
                << " defect=" << format_double(rq.defect) << "\n";
      for (int r = 1; r <= rmax; ++r)
        std::cout << "kappa(" << r << ")=" << format_double(kappa(r)) << "\n";
      auto p = exponent_params(y);
      std::cout << "y=" << format_double(y) << " m=" << format_double(p.m)
                << " n=" << format_double(p.n_exp)
                << " thm11_exponent=" << format_double(p.upper_moment_exponent())
                << " lower_distinct=" << format_double(p.lower_exponent_distinct())
                << " lower_equal=" << format_double(p.lower_exponent_equal())
                << "\n";
      return 0;
    }
    if (c_d3->parsed() || c_d1->parsed() || c_dk->parsed()) {
      FactorSieve sieve =
          build_sieve((uint32_t)std::max<uint64_t>(arg_n, 2), max_sieve_bytes);
      FactoredInteger fi = factorize(sieve, arg_n);
      if (c_d3->parsed()) {
        auto r = delta3_sup(fi, parse_char_spec(chi1_spec), parse_char_spec(chi2_spec));
        print_sup(r);
      } else if (c_d1->parsed()) {
        auto r = delta_sup(fi, parse_char_spec(chi_spec));
        std::cout << "value=" << format_double(r.value) << "\n";
        std::cout << "witness u=" << format_double(r.arg_u)
                  << " v=" << format_double(r.arg_v) << " run [" << r.run.lo
                  << ".." << r.run.hi << "]\n";
      } else {
        auto r = delta_k_sup(fi, parse_char_spec(chi1_spec),
                             parse_char_spec(chi2_spec), arg_theta, arg_k);
        std::cout << "value=" << format_double(r.value) << "\n";
        std::cout << "witness u=" << format_double(r.u)
                  << " v1=" << format_double(r.v1) << " v2=" << format_double(r.v2)
                  << " w=" << format_double(r.w) << " run [" << r.run.lo << ".."
                  << r.run.hi << "]\n";
      }
      return 0;
    }
    if (c_scan->parsed()) {
      scan_cfg.x_grid = make_grid(grid, xmax);
      FactorSieve sieve =
          build_sieve((uint32_t)std::max<uint64_t>(scan_cfg.x_grid.back(), 2),
                      max_sieve_bytes);
      MomentSeries series = moment_scan(sieve, scan_cfg);
      if (!out.empty()) {
        export_series(series, out,
                      format == "json" ? ExportFormat::json : ExportFormat::csv);
      } else if (format == "json") {
        std::cout << series_to_json(series) << "\n";
      } else {
        write_series_csv(series, std::cout);
      }
      std::cerr << "config_hash=" << series.config_hash << " runtime="
                << format_double(series.runtime_seconds) << "s\n";
      try {
        auto fit = fit_exponent(series, "loglog");
        std::cerr << "loglog slope=" << format_double(fit.slope)
                  << " r2=" << format_double(fit.r_squared) << "\n";
      } catch (const std::exception&) {
        // too few checkpoints for a fit; the scan output stands on its own
      }
      return 0;
    }
    if (c_con->parsed()) {
      auto xs = make_grid(grid, xmax);
      FactorSieve sieve =
          build_sieve((uint32_t)std::max<uint64_t>(xs.back(), 2), max_sieve_bytes);
      auto con = contrast_principal_case(sieve, xs, con_chi, con_alt, y, con_threads);
      std::ostream* os = &std::cout;
      std::ofstream fs;
      if (!out.empty()) {
        fs.open(out, std::ios::binary);
        if (!fs) throw std::invalid_argument("cannot open output file " + out);
        os = &fs;
      }
      (*os) << "x,S_equal,S_distinct,ratio\n";
      for (size_t i = 0; i < xs.size(); ++i)
        (*os) << xs[i] << ',' << format_double(con.equal_pair.rows[i].S) << ','
              << format_double(con.distinct_pair.rows[i].S) << ','
              << format_double(con.ratio[i]) << "\n";
      return 0;
    }
    if (c_audit->parsed()) return run_audit(audit);
    if (c_pr->parsed()) {
      FactorSieve sieve =
          build_sieve((uint32_t)std::max<uint64_t>(pr_x, 2), max_sieve_bytes);
      DirichletCharacter chi = parse_char_spec(pr_chi);
      double avg = prime_average(sieve, pr_x, chi, pr_theta);
      auto tw = prime_twisted_average(sieve, pr_x, chi, pr_theta);
      std::cout << "prime_average=" << format_double(avg) << "\n";
      std::cout << "kappa(r)=" << format_double(kappa(chi.order()))
                << " rho_plus_2=" << format_double(rho_closed_form() + 2.0) << "\n";
      std::cout << "twisted_mean=" << format_double(tw.real()) << "+"
                << format_double(tw.imag()) << "i modulus="
                << format_double(std::abs(tw)) << "\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
