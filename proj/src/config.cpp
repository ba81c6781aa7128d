#include "msq/config.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "msq/errors.hpp"
#include "msq/rng.hpp"

namespace msq {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::FrameError: return "frame";
    case ExperimentKind::ConstantTerm: return "constant-term";
    case ExperimentKind::FourierPlateau: return "fourier";
    case ExperimentKind::CsTwoStage: return "cs";
    case ExperimentKind::MuStudy: return "mu";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  if (name == "frame") return ExperimentKind::FrameError;
  if (name == "constant-term") return ExperimentKind::ConstantTerm;
  if (name == "fourier") return ExperimentKind::FourierPlateau;
  if (name == "cs") return ExperimentKind::CsTwoStage;
  if (name == "mu") return ExperimentKind::MuStudy;
  throw ConfigError("experiment: unknown kind '" + std::string(name) + "'");
}

std::string to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::UnitNorm: return "unit";
    case SignalKind::Spike: return "spike";
    case SignalKind::Explicit: return "explicit";
    case SignalKind::SparsePm: return "sparse";
  }
  return "unknown";
}

SignalKind parse_signal_kind(std::string_view name) {
  if (name == "unit") return SignalKind::UnitNorm;
  if (name == "spike") return SignalKind::Spike;
  if (name == "explicit") return SignalKind::Explicit;
  if (name == "sparse") return SignalKind::SparsePm;
  throw ConfigError("signal: unknown kind '" + std::string(name) + "' (unit, spike, explicit, sparse)");
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  const std::vector<double> wide{10, 20, 50, 100, 200, 500, 1000};
  switch (kind) {
    case ExperimentKind::FrameError:
      cfg.ensembles = {EnsembleKind::Gaussian, EnsembleKind::Bernoulli, EnsembleKind::SphereRows};
      for (int i = 0; i <= 12; ++i) cfg.lambdas.push_back(std::pow(10.0, i / 6.0));
      cfg.deltas = {0.01, 0.05, 0.1};
      cfg.fit_min_lambda = 2.0;
      break;
    case ExperimentKind::ConstantTerm:
      cfg.ensembles = {EnsembleKind::Gaussian};
      cfg.lambdas = wide;
      cfg.deltas = {4.0};
      break;
    case ExperimentKind::FourierPlateau:
      cfg.ensembles = {EnsembleKind::PartialDFT};
      cfg.ambient_n = 100000;
      cfg.lambdas = wide;
      cfg.deltas = {0.01};
      break;
    case ExperimentKind::CsTwoStage:
      cfg.ensembles = {EnsembleKind::Gaussian};
      cfg.ambient_n = 1000;
      cfg.lambdas = {5, 10, 15, 20, 25};
      cfg.deltas = {0.01, 0.05};
      cfg.signal = SignalKind::SparsePm;
      cfg.bernoulli_skip_deltas = {0.1};
      break;
    case ExperimentKind::MuStudy:
      cfg.ensembles = {EnsembleKind::Gaussian, EnsembleKind::Bernoulli, EnsembleKind::SphereRows};
      cfg.ambient_n = 100000;
      cfg.lambdas = {1000};
      cfg.deltas = {0.5, 1.0, 2.0, 4.0};
      break;
  }
  return cfg;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError(key + ": '" + text + "' is not a finite number");
  }
  return v;
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    // Accept integral reals such as 1e6.
    const double d = parse_real(key, text);
    if (d != std::floor(d) || std::abs(d) > 9.0e18) throw ConfigError(key + ": '" + text + "' is not an integer");
    return static_cast<std::int64_t>(d);
  }
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  if (!text.empty() && text[0] == '-') throw ConfigError(key + ": must be non-negative");
  const unsigned long long v = std::strtoull(text.c_str(), &end, 0);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError(key + ": '" + text + "' is not an unsigned 64-bit integer");
  }
  return v;
}

std::vector<double> parse_reals(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(parse_real(key, item));
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key + ": expected true or false");
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i]);
  }
  return out;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "experiment") {
    cfg.experiment = parse_experiment_kind(value);
  } else if (key == "ensemble" || key == "ensembles") {
    cfg.ensembles.clear();
    for (const auto& item : split_list(value)) cfg.ensembles.push_back(parse_ensemble_kind(item));
  } else if (key == "n" || key == "ambient_n") {
    cfg.ambient_n = parse_int(key, value);
  } else if (key == "subgaussian_k") {
    cfg.subgaussian_norm_k = parse_real(key, value);
  } else if (key == "k") {
    cfg.k = parse_int(key, value);
  } else if (key == "lambdas") {
    cfg.lambdas = parse_reals(key, value);
  } else if (key == "ms") {
    cfg.ms.clear();
    for (const auto& item : split_list(value)) {
      const auto m = parse_int(key, item);
      if (m < 1) throw ConfigError("ms: every m must be >= 1");
      cfg.ms.push_back(m);
    }
  } else if (key == "deltas" || key == "delta") {
    cfg.deltas = parse_reals(key, value);
  } else if (key == "trials") {
    cfg.trials = parse_int(key, value);
  } else if (key == "seed" || key == "master_seed") {
    cfg.master_seed = parse_u64(key, value);
  } else if (key == "signal") {
    cfg.signal = parse_signal_kind(value);
  } else if (key == "signal_values") {
    cfg.signal_values = parse_reals(key, value);
  } else if (key == "signal_norm") {
    cfg.signal_norm = parse_real(key, value);
  } else if (key == "spike_value") {
    cfg.spike_value = parse_real(key, value);
  } else if (key == "alpha") {
    cfg.alpha_doc = parse_real(key, value);
  } else if (key == "out" || key == "output") {
    cfg.output_path = value;
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(parse_int(key, value));
  } else if (key == "fit_min_lambda") {
    cfg.fit_min_lambda = parse_real(key, value);
  } else if (key == "failure_budget") {
    cfg.failure_budget = parse_real(key, value);
  } else if (key == "c_k") {
    cfg.constants.c_k_ensemble = parse_real(key, value);
  } else if (key == "c1") {
    cfg.constants.c1 = parse_real(key, value);
  } else if (key == "c2") {
    cfg.constants.c2 = parse_real(key, value);
  } else if (key == "c3") {
    cfg.constants.c3 = parse_real(key, value);
  } else if (key == "mc_trials") {
    cfg.mc_trials = parse_int(key, value);
  } else if (key == "tol_feas") {
    cfg.solver.tol_feas = parse_real(key, value);
  } else if (key == "tol_obj") {
    cfg.solver.tol_obj = parse_real(key, value);
  } else if (key == "max_iter") {
    cfg.solver.max_iter = parse_int(key, value);
  } else if (key == "bernoulli_skip_deltas") {
    cfg.bernoulli_skip_deltas = parse_reals(key, value);
  } else if (key == "rip_c4_bar") {
    cfg.rip_c4_bar = parse_real(key, value);
  } else if (key == "full_scale") {
    if (parse_bool(key, value)) cfg.trials = 1000;
  } else {
    throw ConfigError(key + ": unknown setting");
  }
}

std::int64_t measurements_for(double lambda, std::int64_t k) {
  return std::max<std::int64_t>(1, std::llround(lambda * static_cast<double>(k)));
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.k < 1) throw ConfigError("k: must be >= 1");
  if (cfg.trials < 1) throw ConfigError("trials: must be >= 1");
  if (cfg.ensembles.empty()) throw ConfigError("ensemble: at least one is required");
  if (cfg.lambdas.empty()) throw ConfigError("lambdas: at least one value is required");
  for (double l : cfg.lambdas) {
    if (!(l >= 1.0) || !std::isfinite(l)) throw ConfigError("lambdas: every lambda must be >= 1 (got " + fmt(l) + ")");
  }
  if (cfg.deltas.empty()) throw ConfigError("deltas: at least one value is required");
  for (double d : cfg.deltas) {
    if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("deltas: every delta must be > 0 (got " + fmt(d) + ")");
  }
  if (cfg.threads < 0) throw ConfigError("threads: must be >= 0");
  if (!(cfg.failure_budget >= 0.0 && cfg.failure_budget <= 1.0)) throw ConfigError("failure_budget: must lie in [0, 1]");
  if (!(cfg.fit_min_lambda >= 0.0)) throw ConfigError("fit_min_lambda: must be >= 0");
  if (!(cfg.constants.c_k_ensemble > 0.0)) throw ConfigError("c_k: must be > 0");
  if (!(cfg.constants.c1 >= 0.0)) throw ConfigError("c1: must be >= 0");
  if (!(cfg.constants.c2 > 0.0 && cfg.constants.c2 < 1.0)) throw ConfigError("c2: must lie in (0, 1)");
  if (!(cfg.constants.c3 > 0.0)) throw ConfigError("c3: must be > 0");
  if (!(cfg.subgaussian_norm_k > 0.0)) throw ConfigError("subgaussian_k: must be > 0");
  if (!(cfg.signal_norm >= 0.0)) throw ConfigError("signal_norm: must be >= 0");
  if (!(cfg.solver.tol_feas >= 0.0)) throw ConfigError("tol_feas: must be >= 0");
  if (!(cfg.solver.tol_obj >= 0.0)) throw ConfigError("tol_obj: must be >= 0");
  if (cfg.solver.max_iter < 1) throw ConfigError("max_iter: must be >= 1");
  if (!(cfg.rip_c4_bar > 0.0)) throw ConfigError("rip_c4_bar: must be > 0");

  const bool has_dft = std::find(cfg.ensembles.begin(), cfg.ensembles.end(), EnsembleKind::PartialDFT) !=
                       cfg.ensembles.end();
  const bool only_dft = std::all_of(cfg.ensembles.begin(), cfg.ensembles.end(),
                                    [](EnsembleKind e) { return e == EnsembleKind::PartialDFT; });
  switch (cfg.experiment) {
    case ExperimentKind::FrameError:
    case ExperimentKind::ConstantTerm:
    case ExperimentKind::CsTwoStage:
      if (has_dft) throw ConfigError("ensemble: " + to_string(cfg.experiment) + " takes real ensembles only");
      break;
    case ExperimentKind::FourierPlateau:
      if (!only_dft) throw ConfigError("ensemble: fourier takes dft only");
      break;
    case ExperimentKind::MuStudy:
      if (cfg.mc_trials < 1) throw ConfigError("mc_trials: must be >= 1");
      break;
  }
  if (cfg.experiment == ExperimentKind::ConstantTerm && cfg.k < 3) {
    throw ConfigError("k: constant-term bands need k >= 3");
  }
  if (has_dft) {
    if (cfg.ambient_n < cfg.k) throw ConfigError("n: dft size must be >= k");
    if (cfg.experiment != ExperimentKind::MuStudy) {
      for (double l : cfg.lambdas) {
        if (measurements_for(l, cfg.k) > cfg.ambient_n) {
          throw ConfigError("n: dft size " + std::to_string(cfg.ambient_n) + " is below m = " +
                            std::to_string(measurements_for(l, cfg.k)));
        }
      }
    }
  }
  if (cfg.experiment == ExperimentKind::CsTwoStage) {
    if (cfg.signal != SignalKind::SparsePm) throw ConfigError("signal: cs draws sparse signals (signal = sparse)");
    if (cfg.ambient_n < cfg.k) throw ConfigError("n: must be >= k for cs");
  } else {
    if (cfg.signal == SignalKind::SparsePm) throw ConfigError("signal: sparse is only for cs");
    if (cfg.signal == SignalKind::Explicit && static_cast<std::int64_t>(cfg.signal_values.size()) != cfg.k) {
      throw ConfigError("signal_values: need exactly k = " + std::to_string(cfg.k) + " entries");
    }
  }
}

ExperimentConfig load_config(ExperimentKind kind, const std::string& path,
                             const std::vector<std::pair<std::string, std::string>>& overrides) {
  ExperimentConfig cfg = default_config(kind);
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    for (const auto& [key, value] : parse_config_text(ss.str())) {
      if (key == "experiment" && parse_experiment_kind(value) != kind) {
        throw ConfigError("experiment: file says '" + value + "' but the command is '" + to_string(kind) + "'");
      }
      apply_setting(cfg, key, value);
    }
  }
  for (const auto& [key, value] : overrides) apply_setting(cfg, key, value);
  if (!cfg.ms.empty()) {
    cfg.lambdas.clear();
    for (auto m : cfg.ms) cfg.lambdas.push_back(static_cast<double>(m) / static_cast<double>(cfg.k));
    cfg.ms.clear();
  }
  validate(cfg);
  return cfg;
}

Vec fixed_signal(const ExperimentConfig& cfg) {
  switch (cfg.signal) {
    case SignalKind::UnitNorm: {
      Stream stream(mix_seed(cfg.master_seed, {0x5349474eULL}));
      Vec x(cfg.k);
      double norm = 0.0;
      do {
        for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = stream.normal();
        norm = euclidean_norm(x);
      } while (norm == 0.0);
      return x * (cfg.signal_norm / norm);
    }
    case SignalKind::Spike: {
      Vec x = Vec::Zero(cfg.k);
      x[0] = cfg.spike_value;
      return x;
    }
    case SignalKind::Explicit:
      return Eigen::Map<const Vec>(cfg.signal_values.data(), static_cast<Eigen::Index>(cfg.signal_values.size()));
    case SignalKind::SparsePm:
      break;
  }
  throw ContractError("fixed_signal: sparse signals are drawn per trial");
}

std::string render_config(const ExperimentConfig& cfg) {
  std::string out;
  auto line = [&](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  line("experiment", to_string(cfg.experiment));
  std::string ens;
  for (std::size_t i = 0; i < cfg.ensembles.size(); ++i) ens += (i ? ", " : "") + to_string(cfg.ensembles[i]);
  line("ensemble", ens);
  line("n", std::to_string(cfg.ambient_n));
  line("subgaussian_k", fmt(cfg.subgaussian_norm_k));
  line("k", std::to_string(cfg.k));
  line("lambdas", join(cfg.lambdas));
  line("deltas", join(cfg.deltas));
  line("trials", std::to_string(cfg.trials));
  line("seed", std::to_string(cfg.master_seed));
  line("signal", to_string(cfg.signal));
  if (!cfg.signal_values.empty()) line("signal_values", join(cfg.signal_values));
  line("signal_norm", fmt(cfg.signal_norm));
  line("spike_value", fmt(cfg.spike_value));
  line("alpha", fmt(cfg.alpha_doc));
  if (!cfg.output_path.empty()) line("out", cfg.output_path);
  line("threads", std::to_string(cfg.threads));
  line("fit_min_lambda", fmt(cfg.fit_min_lambda));
  line("failure_budget", fmt(cfg.failure_budget));
  line("c_k", fmt(cfg.constants.c_k_ensemble));
  line("c1", fmt(cfg.constants.c1));
  line("c2", fmt(cfg.constants.c2));
  line("c3", fmt(cfg.constants.c3));
  line("mc_trials", std::to_string(cfg.mc_trials));
  line("tol_feas", fmt(cfg.solver.tol_feas));
  line("tol_obj", fmt(cfg.solver.tol_obj));
  line("max_iter", std::to_string(cfg.solver.max_iter));
  if (!cfg.bernoulli_skip_deltas.empty()) line("bernoulli_skip_deltas", join(cfg.bernoulli_skip_deltas));
  line("rip_c4_bar", fmt(cfg.rip_c4_bar));
  return out;
}

}  // namespace msq
