// msq_cli <frame|constant-term|fourier|cs|mu> [--config file] [--seed n] [--trials n]
//         [--out path] [--threads n] [--set key=value ...]
//
// Exit codes: 0 ok, 2 configuration error, 3 solver failures above the
// failure budget, 1 anything else (including a violated hard bound).

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "msq/config.hpp"
#include "msq/errors.hpp"
#include "msq/harness.hpp"

namespace {

struct Options {
  std::string config;
  std::string seed;
  std::string trials;
  std::string out;
  std::string threads;
  std::vector<std::string> sets;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "flat key = value file");
  sub->add_option("--seed", o.seed, "master seed (u64)");
  sub->add_option("--trials", o.trials, "trials per cell");
  sub->add_option("--out", o.out, "CSV path; the JSON sidecar goes to <path>.json");
  sub->add_option("--threads", o.threads, "worker threads (default: $MSQ_THREADS, then all cores)");
  sub->add_option("--set", o.sets, "any config key, as key=value (repeatable)");
}

int run(msq::ExperimentKind kind, const Options& o) {
  std::vector<std::pair<std::string, std::string>> overrides;
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw msq::ConfigError("--set: expected key=value, got '" + s + "'");
    overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  if (!o.seed.empty()) overrides.emplace_back("seed", o.seed);
  if (!o.trials.empty()) overrides.emplace_back("trials", o.trials);
  if (!o.out.empty()) overrides.emplace_back("out", o.out);
  if (!o.threads.empty()) overrides.emplace_back("threads", o.threads);

  const msq::ExperimentConfig cfg = msq::load_config(kind, o.config, overrides);
  const std::string path = cfg.output_path.empty() ? msq::to_string(kind) + ".csv" : cfg.output_path;
  const msq::ExperimentReport report = msq::run_experiment(cfg);
  msq::write_report(report, path);

  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& f : report.fits) {
    std::fprintf(stderr, "%s delta=%g slope=%.4f", msq::to_string(f.ensemble).c_str(), f.delta, f.slope);
    if (f.plateau) std::fprintf(stderr, " plateau=%.6g", *f.plateau);
    std::fprintf(stderr, "\n");
  }
  std::cerr << "wrote " << path << " and " << path << ".json\n";

  if (report.bound_violations() > 0) {
    std::cerr << "error: " << report.bound_violations() << " hard-bound violations\n";
    return 1;
  }
  if (report.failure_budget_exceeded()) {
    std::cerr << "error: " << report.solver_failures << " of " << report.solver_attempts
              << " solves failed, above failure_budget " << cfg.failure_budget << '\n';
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Memoryless scalar quantization experiments"};
  app.require_subcommand(1);
  Options opts;
  const std::vector<std::pair<std::string, msq::ExperimentKind>> commands{
      {"frame", msq::ExperimentKind::FrameError},
      {"constant-term", msq::ExperimentKind::ConstantTerm},
      {"fourier", msq::ExperimentKind::FourierPlateau},
      {"cs", msq::ExperimentKind::CsTwoStage},
      {"mu", msq::ExperimentKind::MuStudy},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, kind] : commands) {
    auto* sub = app.add_subcommand(name);
    add_common(sub, opts);
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) return run(commands[i].second, opts);
    }
  } catch (const msq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
