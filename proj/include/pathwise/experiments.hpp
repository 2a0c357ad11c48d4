#pragma once

#include "pathwise/config.hpp"
#include "pathwise/convergence.hpp"
#include "pathwise/hypotheses.hpp"
#include "pathwise/spde.hpp"
#include "pathwise/weak.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pathwise {

/// Bumped whenever one of the pass/fail tolerances below changes; recorded
/// in every run's provenance file.
inline constexpr int kToleranceVersion = 1;
/// verify-weak passes when max_j max_t |r_j(t)| / normalizer_j stays below this.
inline constexpr double kWeakTolerance = 1e-2;
/// wong-zakai passes when the finest approximant error is below this
/// fraction of ||u0||_p.
inline constexpr double kWongZakaiFraction = 0.05;
/// Points per hypothesis audit (doubled internally for the stability check).
inline constexpr int kHypothesisSamples = 4096;

/// Command-line overrides applied on top of a config.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  /// Output directory in place of the config's out_dir. The recorded config
  /// keeps its own out_dir.
  std::optional<std::filesystem::path> out;
  /// Replays a stored path instead of sampling one.
  std::optional<std::filesystem::path> path_file;
  /// Keep every k-th step; 0 picks 16 evenly spaced snapshots when the step
  /// count allows it and every step otherwise.
  int snapshot_every = 0;
  /// wong-zakai: repeat over this many consecutive seeds and keep the worst.
  int seeds = 1;
};

struct CommandResult {
  bool pass = true;
  std::string summary;
};

/// Applies the seed override.
ExperimentConfig with_overrides(ExperimentConfig cfg, const RunOptions& opts);

/// The Brownian path of the run: sampled from the seed, or read from
/// opts.path_file (which must match the config's d, T and step count).
SamplePath driving_path(const ExperimentConfig& cfg, const RunOptions& opts);

int default_snapshot_every(int steps);

SpdeOptions spde_options(const ExperimentConfig& cfg, const DriftField& b, const SpatialGrid& grid,
                         int snapshot_every);

/// CFL precheck on the run grid followed by solve_spde.
SpdeSolution run_solve(const ExperimentConfig& cfg, const SamplePath& B, int snapshot_every);

/// Weak residuals of a solution against phi_count test functions drawn from
/// the config seed.
WeakResidualReport weak_audit(const ExperimentConfig& cfg, const SpdeSolution& sol);

/// Hypothesis audit of the configured drift on the computational box with
/// q conjugate to p.
HypothesisReport hypothesis_audit(const ExperimentConfig& cfg);

struct UniquenessStudy {
  std::vector<int> ladder;
  /// sup over snapshots of ||u_SL - u_FV||_p per ladder level.
  ConvergenceTable table;
  /// Same distance of each scheme to the closed form, when one exists.
  std::optional<std::vector<double>> oracle_sl;
  std::optional<std::vector<double>> oracle_fv;
  HypothesisReport hypotheses;
  /// Set when the drift fails its hypothesis audit.
  bool exploratory = false;
  /// Discrepancy strictly decreasing over the last 3 levels.
  bool pass = false;
};

/// Ladder N/8, N/4, N/2, N at fixed dt; the upwind CFL is checked on the
/// finest grid before anything runs.
std::vector<int> uniqueness_ladder(const ExperimentConfig& cfg);
UniquenessStudy uniqueness_study(const ExperimentConfig& cfg, const SamplePath& B, const std::vector<int>& ladder,
                                 int snapshot_every);

struct WongZakaiStudy {
  /// E_n = max over snapshots of ||u_n(t) - u(t)||_p per level n.
  ConvergenceTable table;
  /// sup_t |B_n(t) - B(t)| per level.
  std::vector<double> sup_distances;
  double reference_norm = 0.0;
  bool pass = false;
};

/// Levels come from cfg.wz_levels; the largest must equal the step count.
/// The reference and every approximant share grid, dt and snapshots.
WongZakaiStudy wong_zakai_study(const ExperimentConfig& cfg, const SamplePath& B, int snapshot_every);

/// Level-wise maximum of several studies over the same levels.
WongZakaiStudy worst_case(const std::vector<WongZakaiStudy>& studies, const ExperimentConfig& cfg);

/// Subcommands. Each writes its CSV files into the output directory and
/// reports pass or fail; configuration problems throw ConfigurationError and
/// solver failures throw the solver's error.
CommandResult cmd_solve(const ExperimentConfig& cfg, const RunOptions& opts);
/// In-config: solves with every step kept (unless opts.snapshot_every says
/// otherwise) and audits the result.
CommandResult cmd_verify_weak(const ExperimentConfig& cfg, const RunOptions& opts);
/// Audits the artifacts of an earlier solve. Missing files throw
/// ConfigurationError. Output goes to opts.out, else into the run directory.
CommandResult cmd_verify_weak_stored(const std::filesystem::path& run_dir, const RunOptions& opts);
CommandResult cmd_uniqueness_crosscheck(const ExperimentConfig& cfg, const RunOptions& opts);
CommandResult cmd_wong_zakai(const ExperimentConfig& cfg, const RunOptions& opts);
CommandResult cmd_hypotheses(const ExperimentConfig& cfg, const RunOptions& opts);

/// Reads back the artifacts written by cmd_solve.
struct StoredRun {
  ExperimentConfig config;
  SpdeSolution solution;
};
StoredRun load_run(const std::filesystem::path& run_dir);

}  // namespace pathwise
