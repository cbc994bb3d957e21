#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "polyprophet/cli.hpp"

namespace {

void add_common(CLI::App* cmd, polyprophet::cli::Options& opts, bool with_out) {
  cmd->add_option("--config", opts.config_path, "experiment config file (JSON)")
      ->required();
  if (with_out) {
    cmd->add_option("--out", opts.out_path,
                    "output base path: writes <out>.json and appends <out>.csv");
  }
  auto* seed = cmd->add_option_function<uint64_t>(
      "--seed", [&opts](uint64_t s) { opts.seed = s; }, "override the config seed");
  seed->expected(1);
  auto* trials = cmd->add_option_function<int64_t>(
      "--trials", [&opts](int64_t t) { opts.trials = t; }, "override the trial count");
  trials->expected(1);
  cmd->add_option("--jobs", opts.jobs, "worker threads (0 = hardware concurrency)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyprophet: online selection under polymatroid constraints"};
  app.require_subcommand(1);

  polyprophet::cli::Options run_opts, verify_opts, sweep_opts, mech_opts;

  CLI::App* run = app.add_subcommand("run", "run one experiment config");
  add_common(run, run_opts, true);

  CLI::App* verify = app.add_subcommand("verify", "run the structural property suite");
  verify->add_option("--config", verify_opts.config_path, "config file (JSON)")
      ->required();
  verify->add_option("--out", verify_opts.out_path, "write <out>.json property report");
  verify->add_option_function<uint64_t>(
      "--seed", [&](uint64_t s) { verify_opts.seed = s; }, "override the config seed");
  verify->add_option_function<int>(
      "--budget", [&](int b) { verify_opts.budget = b; }, "fuzzed instance count");
  verify->add_option("--jobs", verify_opts.jobs, "worker threads (0 = hardware concurrency)");

  CLI::App* sweep = app.add_subcommand("sweep", "run every cell of a parameter grid");
  add_common(sweep, sweep_opts, true);

  CLI::App* mech = app.add_subcommand("mechanism", "run a posted-price mechanism config");
  add_common(mech, mech_opts, true);

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return polyprophet::cli::cmd_run(run_opts, std::cout, std::cerr);
  if (verify->parsed()) {
    return polyprophet::cli::cmd_verify(verify_opts, std::cout, std::cerr);
  }
  if (sweep->parsed()) return polyprophet::cli::cmd_sweep(sweep_opts, std::cout, std::cerr);
  if (mech->parsed()) {
    return polyprophet::cli::cmd_mechanism(mech_opts, std::cout, std::cerr);
  }
  return 0;
}
