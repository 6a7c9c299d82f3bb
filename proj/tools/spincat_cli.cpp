// spincat: run spin-cat error-correction experiments from a TOML config.

#include "spincat/errors.hpp"
#include "spincat/harness/config.hpp"
#include "spincat/harness/experiments.hpp"
#include "spincat/harness/output.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitGuard = 3;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::string format = "csv";
  std::optional<int> trials;
  std::optional<unsigned> workers;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "TOML experiment config")->required();
  cmd->add_option("--seed", o.seed, "master seed (overrides the config)");
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--trials", o.trials, "Monte Carlo trials per point (overrides the config)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--workers", o.workers, "worker threads; results do not depend on it")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--quiet", o.quiet, "suppress progress output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-cat qudit error-correction simulator", "spincat"};
  app.set_version_flag("--version", std::string(SPINCAT_VERSION));
  app.require_subcommand(1);

  Options opts;
  for (const char* name : {"fig3_sweep", "phase_sweep", "breakeven", "erasure_scan",
                           "kl_report", "tomo_calibration"}) {
    add_common(app.add_subcommand(name, std::string("run the ") + name + " experiment"), opts);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    spincat::ConfigOverrides ov;
    ov.experiment = spincat::experiment_from_string(name);
    ov.seed = opts.seed;
    ov.trials = opts.trials;
    ov.workers = opts.workers;
    const spincat::ExperimentConfig cfg = spincat::load_config(opts.config, ov);
    if (!opts.quiet)
      std::fprintf(stderr, "%s: seed %llu, %d trials/point\n", name.c_str(),
                   static_cast<unsigned long long>(cfg.seed), cfg.trials);
    const spincat::RunRecord record = spincat::run_experiment(cfg);
    const auto format =
        opts.format == "json" ? spincat::OutputFormat::json : spincat::OutputFormat::csv;
    for (const auto& path : spincat::write_outputs(record, opts.out, format))
      if (!opts.quiet) std::fprintf(stderr, "wrote %s\n", path.c_str());
    if (!opts.quiet) std::cout << record.summary.dump(2) << "\n";
    return kExitOk;
  } catch (const spincat::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const spincat::NumericalGuardError& e) {
    std::fprintf(stderr, "numerical guard: %s\n", e.what());
    return kExitGuard;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
