#pragma once

#include "pathwise/analytic.hpp"
#include "pathwise/drift.hpp"
#include "pathwise/transport.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pathwise {

/// Multiplies a drift by 1 + amplitude * sin(omega t).
struct Modulation {
  double amplitude = 0.0;
  double omega = 0.0;
};

/// Drift catalog entry with its keyed parameters. Only the parameters of
/// the chosen id may appear in the config object.
struct DriftSpec {
  std::string id = "zero";
  Vec c{};                          // constant
  std::optional<double> scale;      // linear: scale * identity
  std::optional<Jacobian> matrix;   // linear: full matrix
  double amplitude = 1.0;           // stream, shear
  double alpha = 1.0;               // power1d
  std::optional<Modulation> modulation;
};

/// Initial datum from the analytic catalog.
struct InitialSpec {
  std::string id = "bump";
  Vec center{};
  Vec center2{};
  double radius = 1.0;
  double amplitude = 1.0;
  double amplitude2 = 1.0;
  double lo = -1.0;
  double hi = 1.0;
  int wavenumber = 1;
};

enum class MollifyPolicy {
  /// Never mollify.
  none,
  /// Mollify with the configured radius.
  fixed,
  /// Radius 2h on each grid, only for drifts without the `smooth` tag.
  automatic,
};

struct ExperimentConfig {
  int d = 1;
  double L = 4.0;
  int N = 512;
  double T = 1.0;
  double dt = 1.0 / 512.0;
  Scheme scheme = Scheme::semi_lagrangian;
  double p = 2.0;
  std::uint64_t seed = 0;
  DriftSpec drift;
  InitialSpec u0;
  int phi_count = 10;
  std::vector<int> wz_levels;
  MollifyPolicy mollify = MollifyPolicy::automatic;
  double mollify_eps = 0.0;
  std::string out_dir = "out";

  int steps() const { return step_count(T, dt); }
  SpatialGrid grid() const { return SpatialGrid(d, L, N); }
  SpatialGrid grid(int points_per_axis) const { return SpatialGrid(d, L, points_per_axis); }
};

/// Parses and validates a config document. Unknown keys, wrong types, ids
/// outside the catalogs, a dt that does not divide T, Wong-Zakai levels that
/// do not divide the step count and an initial support closer than 10% of L
/// to the box boundary all throw ConfigurationError naming the key.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& file);

/// Canonical JSON with every key present (defaults filled in). Parsing it
/// gives back the same config.
std::string to_json(const ExperimentConfig& cfg);

/// 16 hex digits of the FNV-1a 64-bit hash of to_json(cfg).
std::string config_hash(const ExperimentConfig& cfg);

DriftField build_drift(const ExperimentConfig& cfg);
AnalyticField build_initial(const ExperimentConfig& cfg);

/// Mollifier radius the policy selects on a grid of the given size.
double mollify_radius(const ExperimentConfig& cfg, const DriftField& b, const SpatialGrid& grid);

/// Rejects an upwind run whose Courant number exceeds the limit on the
/// given grid. Semi-Lagrangian runs have no time-step restriction.
void check_cfl(const ExperimentConfig& cfg, const DriftField& b, const SamplePath& B, const SpatialGrid& grid);

}  // namespace pathwise
