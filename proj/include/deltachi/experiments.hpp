#pragma once

// Sieve-scale moment scans S(x) = sum_{n<=x} g(n) delta3_sup(n)^2, exponent
// fits, the equal-vs-distinct character-pair contrast, and export.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "deltachi/characters.hpp"
#include "deltachi/delta.hpp"
#include "deltachi/sieve.hpp"

namespace deltachi {

struct MomentScanConfig {
  std::vector<uint64_t> x_grid;  // increasing checkpoints
  std::string chi1_spec = "3:1";
  std::string chi2_spec = "5:1";
  double y = 1.0;
  uint64_t coprime_to = 0;  // 0 => default to conductor product
  bool squarefree_only = true;
  int threads = 1;
  double oracle_fraction = 0.0;  // fraction of n re-verified by brute force
  uint64_t seed = 12345;
  uint64_t block_size = 1 << 16;
  bool allow_principal = false;
};

struct MomentRow {
  uint64_t x = 0;
  double S = 0.0;
  double S_over_x = 0.0;
  double norm_lower = 0.0;  // S / (x (log x)^{e_lower}); nan when log x <= 0
  double norm_upper = 0.0;
  uint64_t n_processed = 0;  // cumulative count of n with nonzero weight
  uint64_t oracle_checked = 0;
};

struct MomentSeries {
  std::vector<MomentRow> rows;
  std::string config_hash;
  std::string config_json;  // canonical config (for the JSON meta block)
  double e_lower = 0.0, e_upper = 0.0;
  bool pair_product_principal = false;
  uint64_t n_processed = 0, oracle_checked = 0;
  double runtime_seconds = 0.0;  // console diagnostics; never exported
};

// Canonical JSON + FNV hash of a config (key-sorted, round-trip numbers).
std::string canonical_config_json(const MomentScanConfig& cfg);
std::string config_hash(const MomentScanConfig& cfg);

// Deterministic block scan: identical output for any thread count.  Oracle
// spot-checks (seeded selection) hard-fail on any mismatch.
MomentSeries moment_scan(const FactorSieve& sieve, const MomentScanConfig& cfg);

struct FitResult {
  std::string model;  // "loglog" or "log-linear"
  double slope = 0.0, intercept = 0.0, r_squared = 0.0;
  std::vector<double> residuals;
};

// loglog: log(S/x) on log log x; log-linear: S/x on log x.  Uses rows with
// x >= 16; requires at least 4 of them.
FitResult fit_exponent(const MomentSeries& series, const std::string& model);

struct ContrastResult {
  MomentSeries equal_pair;     // (chi, chi): product with conjugate principal
  MomentSeries distinct_pair;  // (chi, chi_alt): product non-principal
  std::vector<double> ratio;   // equal / distinct per checkpoint
};

ContrastResult contrast_principal_case(const FactorSieve& sieve,
                                       const std::vector<uint64_t>& x_grid,
                                       const std::string& chi_spec,
                                       const std::string& chi_alt_spec, double y,
                                       int threads = 1,
                                       double oracle_fraction = 0.0,
                                       uint64_t seed = 12345);

// |log(f/g)| with f = |tau(n,chi,chi,t1,t2)|^2, g = |tau(n,chi,chi,t1,t1)|^2;
// nullopt when either side vanishes (excluded sample).
std::optional<double> lemma51_log_ratio(const FactoredInteger& fi,
                                        const DirichletCharacter& chi,
                                        double theta1, double theta2);

struct RatioSweep {
  double max_log_ratio = 0.0;
  uint64_t samples = 0;
  uint64_t excluded = 0;
  double theta2 = 0.0;
};

// Sweep squarefree n <= x coprime to the modulus with
// theta2 = theta1 + delta_coeff / log x.
RatioSweep lemma51_sweep(const FactorSieve& sieve, const DirichletCharacter& chi,
                         double theta1, uint64_t x, double delta_coeff);

// CSV columns: x,S,S_over_x,norm_lower,norm_upper,n_processed,oracle_checked.
void write_series_csv(const MomentSeries& series, std::ostream& os);
// {"meta": {...}, "rows": [...]}; excludes runtime for byte determinism.
std::string series_to_json(const MomentSeries& series);

enum class ExportFormat { csv, json };
void export_series(const MomentSeries& series, const std::string& path,
                   ExportFormat format);

}  // namespace deltachi
