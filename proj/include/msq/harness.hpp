#pragma once

// Monte Carlo experiment runners and their CSV / JSON output.
//
// Trial t of lambda-grid cell l for ensemble e draws everything from
// substreams of mix_seed(master, {e, l, t}); one frame serves every delta.
// Per-cell statistics are pairwise sums over trials in index order, so the
// output does not depend on the worker count.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "msq/config.hpp"

namespace msq {

struct CurvePoint {
  std::string experiment;
  EnsembleKind ensemble = EnsembleKind::Gaussian;
  std::int64_t k = 0;
  std::int64_t m = 0;
  double lambda = 0.0;  ///< realized m / k
  double delta = 0.0;
  std::int64_t trials = 0;  ///< trials that produced an error value
  double mean_error = 0.0;
  double std_error = 0.0;  ///< standard error of the mean; 0 for a single trial
  std::optional<double> band_lower;
  std::optional<double> band_upper;
  std::optional<double> support_rate;
  std::optional<double> plateau;

  // Sidecar diagnostics.
  std::int64_t attempted = 0;
  std::int64_t solver_failures = 0;
  std::int64_t rank_failures = 0;
  double max_error = 0.0;
  double max_rough_bound = 0.0;
  std::int64_t bound_checked = 0;
  std::int64_t bound_violations = 0;
  std::optional<double> mean_coarse_error;
  std::int64_t recon_mismatches = 0;
};

struct CurveFit {
  EnsembleKind ensemble = EnsembleKind::Gaussian;
  double delta = 0.0;
  double slope = 0.0;  ///< NaN with fewer than two usable points
  std::int64_t points = 0;
  std::optional<double> plateau;
};

struct MuRow {
  EnsembleKind ensemble = EnsembleKind::Gaussian;
  std::int64_t k = 0;
  std::int64_t m = 0;  ///< used for the cap only
  double delta = 0.0;
  double x_norm = 0.0;
  std::optional<double> analytic;
  double mc = 0.0;
  double mc_std_error = 0.0;
  std::int64_t mc_trials = 0;
  double cap = 0.0;
  std::optional<double> bracket_lower;
  std::optional<double> bracket_upper;
  bool cap_ok = true;
};

struct ExperimentReport {
  ExperimentConfig config;
  Vec signal;  ///< empty for cs
  std::vector<CurvePoint> points;
  std::vector<CurveFit> fits;
  std::vector<MuRow> mu_rows;
  std::vector<std::string> warnings;
  std::int64_t solver_attempts = 0;
  std::int64_t solver_failures = 0;

  bool failure_budget_exceeded() const;
  std::int64_t bound_violations() const;
};

ExperimentReport run_frame_experiment(const ExperimentConfig& cfg);
ExperimentReport run_constant_term_experiment(const ExperimentConfig& cfg);
ExperimentReport run_fourier_experiment(const ExperimentConfig& cfg);
ExperimentReport run_cs_experiment(const ExperimentConfig& cfg);
ExperimentReport run_mu_study(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Least-squares slope of log y against log x; pairs with y <= 0 are skipped.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

inline constexpr const char* kCurveCsvHeader =
    "experiment,ensemble,k,m,lambda,delta,trials,mean_error,std_error,band_lower,band_upper,support_rate,plateau";
inline constexpr const char* kMuCsvHeader =
    "experiment,ensemble,k,m,delta,x_norm,mu_analytic,mu_mc,mu_std_error,mc_trials,mu_cap,bracket_lower,bracket_upper";

/// CSV text: curve rows, or mu rows for the mu study.
std::string report_csv(const ExperimentReport& report);

/// Resolved config, seed, signal, diagnostics and fits.
nlohmann::json report_json(const ExperimentReport& report);

/// Writes report_csv to `path` and report_json to `path + ".json"`.
void write_report(const ExperimentReport& report, const std::string& path);

}  // namespace msq
