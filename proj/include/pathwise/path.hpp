#pragma once

#include "pathwise/grid.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pathwise {

enum class PathKind { brownian, piecewise_linear_bv, zero };

std::string to_string(PathKind k);

/// Continuous path W: [0, T] -> R^d, linear between knots, W(0) = 0.
class SamplePath {
public:
  SamplePath(int dimension, std::vector<double> times, std::vector<Vec> values, PathKind kind,
             std::optional<std::uint64_t> seed = std::nullopt);

  int dimension() const { return d_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Vec>& values() const { return values_; }
  PathKind kind() const { return kind_; }
  std::optional<std::uint64_t> seed() const { return seed_; }
  /// Number of intervals K.
  int steps() const { return static_cast<int>(times_.size()) - 1; }
  double horizon() const { return times_.back(); }
  /// Coarse level for piecewise-linear approximants, K otherwise.
  int level() const { return level_; }
  void set_level(int n) { level_ = n; }

  /// Short label for manifests: kind, seed and level.
  std::string label() const;

private:
  int d_;
  std::vector<double> times_;
  std::vector<Vec> values_;
  PathKind kind_;
  std::optional<std::uint64_t> seed_;
  int level_;
};

/// Uniform mesh t_k = k T / K.
std::vector<double> uniform_mesh(double T, int K);

SamplePath zero_path(int d, double T, int K);

/// Cumulative sums of N(0, dt) increments; component a of step k uses the
/// Philox stream keyed by (seed, a, k), so any prefix is reproducible.
SamplePath sample_brownian(std::uint64_t seed, double T, int K, int d);

/// Linear interpolation of `path` through its knots k * (K / n), evaluated
/// back on the fine mesh. Throws ConfigurationError when n does not divide K.
SamplePath piecewise_linear_approx(const SamplePath& path, int n);

/// The same realization observed only at the knots k * (K / n): a path with
/// n intervals and the kind of its source. Used to nest refinement levels.
SamplePath restrict_to_knots(const SamplePath& path, int n);

/// Max over the union mesh of the max-component distance.
double sup_distance(const SamplePath& a, const SamplePath& b);

/// Linear interpolation; throws RangeError outside [0, T].
Vec eval_path(const SamplePath& path, double t);

/// Per-component sum of |W(t_{k+1}) - W(t_k)|.
Vec total_variation(const SamplePath& path);

/// Max over knots of the max-component |W|.
double sup_norm(const SamplePath& path);

/// CSV `k,t,W1[,W2]`.
std::string path_to_csv(const SamplePath& path);
/// Replays a dumped path (kind brownian unless every value is zero).
SamplePath path_from_csv(const std::string& text);

}  // namespace pathwise
