#pragma once

// Experiment configuration: flat `key = value` text, one setting per line,
// lists comma-separated, `#` starts a comment. Command-line overrides use
// the same keys and are applied after the file.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "msq/bounds.hpp"
#include "msq/cs.hpp"
#include "msq/ensembles.hpp"

namespace msq {

enum class ExperimentKind { FrameError, ConstantTerm, FourierPlateau, CsTwoStage, MuStudy };

std::string to_string(ExperimentKind kind);
/// frame, constant-term, fourier, cs, mu
ExperimentKind parse_experiment_kind(std::string_view name);

enum class SignalKind {
  UnitNorm,  ///< seeded Gaussian direction scaled to signal_norm, fixed for the run
  Spike,     ///< (spike_value, 0, ..., 0)
  Explicit,  ///< signal_values
  SparsePm,  ///< k of ambient_n entries at +-1/sqrt(k), fresh per trial
};

std::string to_string(SignalKind kind);
SignalKind parse_signal_kind(std::string_view name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::FrameError;
  std::vector<EnsembleKind> ensembles;
  std::int64_t ambient_n = 0;  ///< DFT size, or sparse signal length
  double subgaussian_norm_k = 1.0;
  std::int64_t k = 20;
  std::vector<double> lambdas;
  std::vector<std::int64_t> ms;  ///< if set, replaces lambdas with m/k in load_config
  std::vector<double> deltas;
  std::int64_t trials = 200;
  std::uint64_t master_seed = 1;
  SignalKind signal = SignalKind::UnitNorm;
  std::vector<double> signal_values;
  double signal_norm = 1.0;
  double spike_value = 1.0;
  double alpha_doc = 0.0;  ///< recorded, never used
  std::string output_path;
  int threads = 0;
  double fit_min_lambda = 0.0;  ///< slope fits use lambda >= this
  double failure_budget = 0.01; ///< tolerated fraction of failed trials
  TheoremConstants constants;
  std::int64_t mc_trials = 100000;
  BpdnOptions solver;
  std::vector<double> bernoulli_skip_deltas;  ///< cs only
  double rip_c4_bar = 1.0;
};

/// Defaults for each experiment at desk scale.
ExperimentConfig default_config(ExperimentKind kind);

/// key/value pairs in file order. Throws ConfigError naming the line.
std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text);

/// Throws ConfigError("<key>: ...") on an unknown key or malformed value.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// default_config, then the file (if path is non-empty), then overrides, then validate.
ExperimentConfig load_config(ExperimentKind kind, const std::string& path,
                             const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& cfg);

/// m = round(lambda k), at least 1.
std::int64_t measurements_for(double lambda, std::int64_t k);

/// The fixed signal of a run. Not valid for SparsePm.
Vec fixed_signal(const ExperimentConfig& cfg);

/// Flat text that load_config reads back to the same configuration.
std::string render_config(const ExperimentConfig& cfg);

}  // namespace msq
