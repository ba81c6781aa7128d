#include "msq/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include "msq/errors.hpp"
#include "msq/linalg.hpp"
#include "msq/mu.hpp"
#include "msq/parallel.hpp"
#include "msq/recon.hpp"
#include "msq/rng.hpp"

namespace msq {

namespace {

// Relative slack for floating-point rounding in hard-bound assertions.
constexpr double kBoundSlack = 1e-12;

std::uint64_t ensemble_code(EnsembleKind kind) { return static_cast<std::uint64_t>(kind); }

EnsembleSpec spec_for(const ExperimentConfig& cfg, EnsembleKind kind) {
  EnsembleSpec spec;
  spec.kind = kind;
  spec.ambient_n = cfg.ambient_n;
  spec.subgaussian_norm_k = cfg.subgaussian_norm_k;
  return spec;
}

struct Summary {
  double mean = 0.0;
  double std_error = 0.0;
};

Summary summarize(const std::vector<double>& v) {
  Summary s;
  const std::size_t n = v.size();
  if (n == 0) return s;
  s.mean = pairwise_sum(v.data(), n) / static_cast<double>(n);
  if (n > 1) {
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (v[i] - s.mean) * (v[i] - s.mean);
    const double var = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
    s.std_error = std::sqrt(var / static_cast<double>(n));
  }
  return s;
}

// Plateau: mean of the curve over the top decade of lambda.
double plateau_of(const std::vector<const CurvePoint*>& curve) {
  double top = 0.0;
  for (const auto* p : curve) top = std::max(top, p->lambda);
  std::vector<double> vals;
  for (const auto* p : curve) {
    if (p->lambda >= top / 10.0 && p->trials > 0) vals.push_back(p->mean_error);
  }
  return summarize(vals).mean;
}

void add_fits(ExperimentReport& report, bool with_plateau) {
  std::map<std::pair<int, double>, std::vector<CurvePoint*>> curves;
  for (auto& p : report.points) curves[{static_cast<int>(p.ensemble), p.delta}].push_back(&p);
  // Keep ensemble order as configured.
  for (EnsembleKind kind : report.config.ensembles) {
    for (double delta : report.config.deltas) {
      auto it = curves.find({static_cast<int>(kind), delta});
      if (it == curves.end()) continue;
      CurveFit fit;
      fit.ensemble = kind;
      fit.delta = delta;
      std::vector<double> xs;
      std::vector<double> ys;
      for (const auto* p : it->second) {
        if (p->lambda >= report.config.fit_min_lambda && p->trials > 0 && p->mean_error > 0.0) {
          xs.push_back(p->lambda);
          ys.push_back(p->mean_error);
        }
      }
      fit.points = static_cast<std::int64_t>(xs.size());
      fit.slope = loglog_slope(xs, ys);
      if (with_plateau) {
        const std::vector<const CurvePoint*> view(it->second.begin(), it->second.end());
        fit.plateau = plateau_of(view);
        for (auto* p : it->second) p->plateau = fit.plateau;
      }
      report.fits.push_back(fit);
    }
  }
}

// Shared by the frame, constant-term and Fourier experiments.
ExperimentReport run_frame_like(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentReport report;
  report.config = cfg;
  report.signal = fixed_signal(cfg);
  const Signal x(report.signal);
  const int threads = resolve_threads(cfg.threads);
  const std::size_t nd = cfg.deltas.size();
  const auto trials = static_cast<std::size_t>(cfg.trials);

  for (EnsembleKind kind : cfg.ensembles) {
    const EnsembleSpec spec = spec_for(cfg, kind);
    for (std::size_t li = 0; li < cfg.lambdas.size(); ++li) {
      const std::int64_t m = measurements_for(cfg.lambdas[li], cfg.k);
      struct TrialOut {
        bool ok = false;
        std::vector<double> error;
        std::vector<double> bound;
      };
      std::vector<TrialOut> out(trials);
      parallel_for(trials, threads, [&](std::size_t t) {
        const std::uint64_t seed = mix_seed(cfg.master_seed, {ensemble_code(kind), li, t});
        const FrameMatrix frame = sample_frame(spec, m, cfg.k, seed);
        TrialOut& o = out[t];
        try {
          const Pseudoinverse pinv = pseudoinverse(frame);
          o.error.resize(nd);
          o.bound.resize(nd);
          for (std::size_t di = 0; di < nd; ++di) {
            const ReconResult r = reconstruct(x, frame, pinv, QuantizerConfig(cfg.deltas[di]));
            o.error[di] = r.error;
            o.bound[di] = r.rough_bound;
          }
          o.ok = true;
        } catch (const RankDeficiencyError&) {
          o.ok = false;
        }
      });

      for (std::size_t di = 0; di < nd; ++di) {
        CurvePoint p;
        p.experiment = to_string(cfg.experiment);
        p.ensemble = kind;
        p.k = cfg.k;
        p.m = m;
        p.lambda = static_cast<double>(m) / static_cast<double>(cfg.k);
        p.delta = cfg.deltas[di];
        p.attempted = cfg.trials;
        std::vector<double> errs;
        for (const auto& o : out) {
          if (!o.ok) {
            ++p.rank_failures;
            continue;
          }
          errs.push_back(o.error[di]);
          p.max_error = std::max(p.max_error, o.error[di]);
          p.max_rough_bound = std::max(p.max_rough_bound, o.bound[di]);
          ++p.bound_checked;
          if (!(o.error[di] <= o.bound[di] * (1.0 + kBoundSlack))) ++p.bound_violations;
        }
        p.trials = static_cast<std::int64_t>(errs.size());
        const Summary s = summarize(errs);
        p.mean_error = s.mean;
        p.std_error = s.std_error;
        if (p.trials > 0 && !(p.mean_error <= p.max_rough_bound * (1.0 + kBoundSlack))) ++p.bound_violations;

        if (cfg.experiment == ExperimentKind::ConstantTerm) {
          const double lam = p.lambda;
          const double ck = cfg.constants.c_k_ensemble;
          if (lam > 4.0 * ck * ck) {
            if (kind == EnsembleKind::Gaussian) {
              const auto band = gaussian_corollary_band(x.norm(), p.delta, lam, cfg.k, cfg.constants.c1);
              p.band_lower = band.error.lower;
              p.band_upper = band.error.upper;
            } else {
              TheoremConstants c = cfg.constants;
              c.lambda = lam;
              const auto band = theorem1_band(mu_cap(p.delta, cfg.k, m, ck), c, cfg.k, p.delta);
              p.band_lower = 0.0;
              p.band_upper = band.upper;
            }
          }
        }
        if (p.rank_failures > 0) {
          report.warnings.push_back(to_string(kind) + " m=" + std::to_string(m) + ": " +
                                    std::to_string(p.rank_failures) + " rank-deficient draws excluded");
        }
        report.points.push_back(p);
      }
    }
  }
  add_fits(report, cfg.experiment != ExperimentKind::FrameError);
  return report;
}

Mat select_columns(const Mat& phi, const std::vector<std::int64_t>& cols) {
  Mat out(phi.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = phi.col(cols[i]);
  return out;
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

nlohmann::json opt_json(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

nlohmann::json num_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

bool ExperimentReport::failure_budget_exceeded() const {
  if (solver_attempts == 0) return false;
  return static_cast<double>(solver_failures) > config.failure_budget * static_cast<double>(solver_attempts);
}

std::int64_t ExperimentReport::bound_violations() const {
  std::int64_t n = 0;
  for (const auto& p : points) n += p.bound_violations;
  for (const auto& r : mu_rows) n += r.cap_ok ? 0 : 1;
  return n;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  const std::size_t n = lx.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mx = pairwise_sum(lx.data(), n) / static_cast<double>(n);
  const double my = pairwise_sum(ly.data(), n) / static_cast<double>(n);
  std::vector<double> sxy(n);
  std::vector<double> sxx(n);
  for (std::size_t i = 0; i < n; ++i) {
    sxy[i] = (lx[i] - mx) * (ly[i] - my);
    sxx[i] = (lx[i] - mx) * (lx[i] - mx);
  }
  const double den = pairwise_sum(sxx.data(), n);
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return pairwise_sum(sxy.data(), n) / den;
}

ExperimentReport run_frame_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment != ExperimentKind::FrameError) throw ConfigError("experiment: expected frame");
  return run_frame_like(cfg);
}

ExperimentReport run_constant_term_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment != ExperimentKind::ConstantTerm) throw ConfigError("experiment: expected constant-term");
  return run_frame_like(cfg);
}

ExperimentReport run_fourier_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment != ExperimentKind::FourierPlateau) throw ConfigError("experiment: expected fourier");
  return run_frame_like(cfg);
}

ExperimentReport run_cs_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment != ExperimentKind::CsTwoStage) throw ConfigError("experiment: expected cs");
  validate(cfg);
  ExperimentReport report;
  report.config = cfg;
  const int threads = resolve_threads(cfg.threads);
  const auto trials = static_cast<std::size_t>(cfg.trials);
  const std::int64_t n = cfg.ambient_n;

  for (EnsembleKind kind : cfg.ensembles) {
    const EnsembleSpec spec = spec_for(cfg, kind);
    std::vector<double> deltas;
    for (double d : cfg.deltas) {
      const bool skip = kind == EnsembleKind::Bernoulli &&
                        std::find(cfg.bernoulli_skip_deltas.begin(), cfg.bernoulli_skip_deltas.end(), d) !=
                            cfg.bernoulli_skip_deltas.end();
      if (skip) {
        report.warnings.push_back("bernoulli: delta=" + fmt(d) + " skipped (bernoulli_skip_deltas)");
      } else {
        deltas.push_back(d);
      }
    }
    const std::size_t nd = deltas.size();

    for (std::size_t li = 0; li < cfg.lambdas.size(); ++li) {
      const std::int64_t m = measurements_for(cfg.lambdas[li], cfg.k);
      const std::int64_t rip_m = rip_sample_size(std::min(cfg.k, n), n, 0.5, cfg.rip_c4_bar);
      if (m < rip_m) {
        report.warnings.push_back("m=" + std::to_string(m) + " is below the advisory RIP sample size " +
                                  std::to_string(rip_m));
      }
      enum class Status { Ok, Solver, Rank };
      struct TrialOut {
        std::vector<Status> status;
        std::vector<double> refined;
        std::vector<double> coarse;
        std::vector<double> bound;  // NaN when the support was missed
        std::vector<char> exact;
        std::vector<char> recon_match;
      };
      std::vector<TrialOut> out(trials);
      parallel_for(trials, threads, [&](std::size_t t) {
        const std::uint64_t base = mix_seed(cfg.master_seed, {ensemble_code(kind), li, t});
        const FrameMatrix phi = sample_frame(spec, m, n, mix_seed(base, {0}));
        const SparseSignal x = sparse_pm_signal(n, cfg.k, mix_seed(base, {1}));
        TrialOut& o = out[t];
        o.status.assign(nd, Status::Ok);
        o.refined.assign(nd, 0.0);
        o.coarse.assign(nd, 0.0);
        o.bound.assign(nd, std::numeric_limits<double>::quiet_NaN());
        o.exact.assign(nd, 0);
        o.recon_match.assign(nd, 1);
        for (std::size_t di = 0; di < nd; ++di) {
          const QuantizerConfig qc(deltas[di]);
          try {
            const TwoStageResult r = two_stage(phi, x, qc, cfg.solver);
            o.refined[di] = r.refined_error;
            o.coarse[di] = r.coarse_error;
            o.exact[di] = r.support_exact ? 1 : 0;
            if (r.support_exact && cfg.k > 0) {
              o.bound[di] = rough_error_bound(r.sigma_min_support, m, qc.delta(), false);
              const FrameMatrix sub(select_columns(phi.real(), x.support()), spec, phi.seed());
              const ReconResult direct = reconstruct(Signal(x.values()), sub, qc);
              o.recon_match[di] = direct.error == r.refined_error ? 1 : 0;
            }
          } catch (const ConvergenceError&) {
            o.status[di] = Status::Solver;
          } catch (const RankDeficiencyError&) {
            o.status[di] = Status::Rank;
          }
        }
      });

      for (std::size_t di = 0; di < nd; ++di) {
        CurvePoint p;
        p.experiment = to_string(cfg.experiment);
        p.ensemble = kind;
        p.k = cfg.k;
        p.m = m;
        p.lambda = static_cast<double>(m) / static_cast<double>(cfg.k);
        p.delta = deltas[di];
        p.attempted = cfg.trials;
        std::vector<double> refined;
        std::vector<double> coarse;
        std::int64_t exact = 0;
        for (const auto& o : out) {
          if (o.status[di] == Status::Solver) {
            ++p.solver_failures;
            continue;
          }
          if (o.status[di] == Status::Rank) {
            ++p.rank_failures;
            continue;
          }
          refined.push_back(o.refined[di]);
          coarse.push_back(o.coarse[di]);
          p.max_error = std::max(p.max_error, o.refined[di]);
          if (o.exact[di]) {
            ++exact;
            ++p.bound_checked;
            p.max_rough_bound = std::max(p.max_rough_bound, o.bound[di]);
            if (!(o.refined[di] <= o.bound[di] * (1.0 + kBoundSlack))) ++p.bound_violations;
            if (!o.recon_match[di]) ++p.recon_mismatches;
          }
        }
        p.trials = static_cast<std::int64_t>(refined.size());
        const Summary s = summarize(refined);
        p.mean_error = s.mean;
        p.std_error = s.std_error;
        p.mean_coarse_error = summarize(coarse).mean;
        p.support_rate = p.trials > 0 ? static_cast<double>(exact) / static_cast<double>(p.trials) : 0.0;
        report.solver_attempts += cfg.trials;
        report.solver_failures += p.solver_failures;
        if (p.solver_failures > 0) {
          report.warnings.push_back(to_string(kind) + " m=" + std::to_string(m) + " delta=" + fmt(p.delta) + ": " +
                                    std::to_string(p.solver_failures) + " solver failures");
        }
        report.points.push_back(p);
      }
    }
  }
  add_fits(report, false);
  return report;
}

ExperimentReport run_mu_study(const ExperimentConfig& cfg) {
  if (cfg.experiment != ExperimentKind::MuStudy) throw ConfigError("experiment: expected mu");
  validate(cfg);
  ExperimentReport report;
  report.config = cfg;
  report.signal = fixed_signal(cfg);
  const Signal x(report.signal);
  const std::int64_t m = measurements_for(cfg.lambdas.back(), cfg.k);

  for (EnsembleKind kind : cfg.ensembles) {
    EnsembleSpec spec = spec_for(cfg, kind);
    for (std::size_t di = 0; di < cfg.deltas.size(); ++di) {
      const QuantizerConfig qc(cfg.deltas[di]);
      MuRow row;
      row.ensemble = kind;
      row.k = cfg.k;
      row.m = m;
      row.delta = qc.delta();
      row.x_norm = x.norm();
      const MuEstimate mc =
          mu_monte_carlo(x, spec, cfg.mc_trials, mix_seed(cfg.master_seed, {ensemble_code(kind), di}), qc, cfg.threads);
      row.mc = mc.value;
      row.mc_std_error = mc.std_error;
      row.mc_trials = mc.trials;
      // Complex rows quantize two real parts, each off by at most delta/2.
      row.cap = mu_cap(qc.delta(), cfg.k, m, cfg.constants.c_k_ensemble) * (spec.is_complex() ? std::sqrt(2.0) : 1.0);
      if (kind == EnsembleKind::Gaussian) {
        row.analytic = mu_gaussian(x, qc).value;
        const ErrorBand br = gaussian_mu_bracket(x.norm(), qc.delta());
        row.bracket_lower = br.lower;
        row.bracket_upper = br.upper;
      }
      row.cap_ok = row.mc <= row.cap + 3.0 * row.mc_std_error && (!row.analytic || *row.analytic <= row.cap);
      report.mu_rows.push_back(row);
    }
  }
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::FrameError: return run_frame_experiment(cfg);
    case ExperimentKind::ConstantTerm: return run_constant_term_experiment(cfg);
    case ExperimentKind::FourierPlateau: return run_fourier_experiment(cfg);
    case ExperimentKind::CsTwoStage: return run_cs_experiment(cfg);
    case ExperimentKind::MuStudy: return run_mu_study(cfg);
  }
  throw ConfigError("experiment: unknown");
}

std::string report_csv(const ExperimentReport& report) {
  std::string out;
  if (report.config.experiment == ExperimentKind::MuStudy) {
    out += kMuCsvHeader;
    out += '\n';
    for (const auto& r : report.mu_rows) {
      out += "mu," + to_string(r.ensemble) + ',' + std::to_string(r.k) + ',' + std::to_string(r.m) + ',' +
             fmt(r.delta) + ',' + fmt(r.x_norm) + ',' + fmt(r.analytic) + ',' + fmt(r.mc) + ',' +
             fmt(r.mc_std_error) + ',' + std::to_string(r.mc_trials) + ',' + fmt(r.cap) + ',' +
             fmt(r.bracket_lower) + ',' + fmt(r.bracket_upper) + '\n';
    }
    return out;
  }
  out += kCurveCsvHeader;
  out += '\n';
  for (const auto& p : report.points) {
    out += p.experiment + ',' + to_string(p.ensemble) + ',' + std::to_string(p.k) + ',' + std::to_string(p.m) + ',' +
           fmt(p.lambda) + ',' + fmt(p.delta) + ',' + std::to_string(p.trials) + ',' + fmt(p.mean_error) + ',' +
           fmt(p.std_error) + ',' + fmt(p.band_lower) + ',' + fmt(p.band_upper) + ',' + fmt(p.support_rate) + ',' +
           fmt(p.plateau) + '\n';
  }
  return out;
}

nlohmann::json report_json(const ExperimentReport& report) {
  using nlohmann::json;
  const ExperimentConfig& cfg = report.config;
  json j;
  json c = json::object();
  for (const auto& [key, value] : parse_config_text(render_config(cfg))) c[key] = value;
  j["config"] = c;
  j["master_seed"] = cfg.master_seed;
  j["alpha_doc"] = cfg.alpha_doc;
  j["signal_kind"] = to_string(cfg.signal);
  j["signal"] = std::vector<double>(report.signal.data(), report.signal.data() + report.signal.size());

  json points = json::array();
  for (const auto& p : report.points) {
    points.push_back({{"ensemble", to_string(p.ensemble)},
                      {"m", p.m},
                      {"lambda", p.lambda},
                      {"delta", p.delta},
                      {"attempted", p.attempted},
                      {"trials", p.trials},
                      {"mean_error", num_json(p.mean_error)},
                      {"max_error", num_json(p.max_error)},
                      {"max_rough_bound", num_json(p.max_rough_bound)},
                      {"bound_checked", p.bound_checked},
                      {"bound_violations", p.bound_violations},
                      {"solver_failures", p.solver_failures},
                      {"rank_failures", p.rank_failures},
                      {"mean_coarse_error", opt_json(p.mean_coarse_error)},
                      {"recon_mismatches", p.recon_mismatches}});
  }
  j["points"] = points;

  json fits = json::array();
  for (const auto& f : report.fits) {
    fits.push_back({{"ensemble", to_string(f.ensemble)},
                    {"delta", f.delta},
                    {"slope", num_json(f.slope)},
                    {"points", f.points},
                    {"fit_min_lambda", cfg.fit_min_lambda},
                    {"plateau", opt_json(f.plateau)}});
  }
  j["fits"] = fits;

  json mu = json::array();
  for (const auto& r : report.mu_rows) {
    mu.push_back({{"ensemble", to_string(r.ensemble)},
                  {"delta", r.delta},
                  {"x_norm", r.x_norm},
                  {"analytic", opt_json(r.analytic)},
                  {"mc", r.mc},
                  {"mc_std_error", r.mc_std_error},
                  {"cap", r.cap},
                  {"cap_ok", r.cap_ok}});
  }
  j["mu"] = mu;
  j["warnings"] = report.warnings;
  j["solver_attempts"] = report.solver_attempts;
  j["solver_failures"] = report.solver_failures;
  j["failure_budget_exceeded"] = report.failure_budget_exceeded();
  j["bound_violations"] = report.bound_violations();
  return j;
}

void write_report(const ExperimentReport& report, const std::string& path) {
  {
    std::ofstream csv(path);
    if (!csv) throw std::runtime_error("cannot write '" + path + "'");
    csv << report_csv(report);
  }
  std::ofstream js(path + ".json");
  if (!js) throw std::runtime_error("cannot write '" + path + ".json'");
  js << report_json(report).dump(2) << '\n';
}

}  // namespace msq
