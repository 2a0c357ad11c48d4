#include "pathwise/config.hpp"
#include "pathwise/errors.hpp"
#include "pathwise/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

enum ExitCode { kPass = 0, kToleranceFailure = 1, kConfigurationFailure = 2, kRuntimeFailure = 3 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pathwise solver and verification harness for stochastic transport equations"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string path_file;
  app.add_option("--config", config_file, "Experiment config (JSON)");
  app.add_option("--out", out_dir, "Output directory (overrides out_dir)");
  app.add_option("--seed", seed, "Path seed (overrides seed)");
  app.add_option("--path-file", path_file, "Replay a stored path CSV instead of sampling");

  int snapshot_every = 0;
  std::string run_dir;
  int seeds = 1;

  auto* solve = app.add_subcommand("solve", "Solve the SPDE and dump snapshots, norms and the path");
  auto* verify = app.add_subcommand("verify-weak", "Evaluate the weak-form residual of a solution");
  auto* uniq = app.add_subcommand("uniqueness", "Cross-check semi-Lagrangian and upwind over a grid ladder");
  auto* wz = app.add_subcommand("wong-zakai", "Refinement study of piecewise-linear path approximants");
  auto* hyp = app.add_subcommand("hypotheses", "Audit the drift hypotheses");
  for (auto* sub : {solve, verify, uniq, wz}) {
    sub->add_option("--snapshot-every", snapshot_every, "Keep every k-th time step")->check(CLI::PositiveNumber);
  }
  verify->add_option("--run-dir", run_dir, "Audit the artifacts of an earlier solve instead of solving");
  wz->add_option("--seeds", seeds, "Repeat over k consecutive seeds and report the worst case")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigurationFailure;
  }

  pathwise::RunOptions opts;
  opts.seed = seed;
  if (!out_dir.empty()) opts.out = out_dir;
  if (!path_file.empty()) opts.path_file = path_file;
  opts.snapshot_every = snapshot_every;
  opts.seeds = seeds;

  try {
    pathwise::CommandResult result;
    if (verify->parsed() && !run_dir.empty()) {
      result = pathwise::cmd_verify_weak_stored(run_dir, opts);
    } else {
      if (config_file.empty()) throw pathwise::ConfigurationError("--config is required");
      const pathwise::ExperimentConfig cfg = pathwise::load_config(config_file);
      if (solve->parsed()) result = pathwise::cmd_solve(cfg, opts);
      if (verify->parsed()) result = pathwise::cmd_verify_weak(cfg, opts);
      if (uniq->parsed()) result = pathwise::cmd_uniqueness_crosscheck(cfg, opts);
      if (wz->parsed()) result = pathwise::cmd_wong_zakai(cfg, opts);
      if (hyp->parsed()) result = pathwise::cmd_hypotheses(cfg, opts);
    }
    std::cout << result.summary << "\n";
    return result.pass ? kPass : kToleranceFailure;
  } catch (const pathwise::ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigurationFailure;
  } catch (const pathwise::RangeError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigurationFailure;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}
