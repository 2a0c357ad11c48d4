#pragma once

#include "pathwise/drift.hpp"
#include "pathwise/field.hpp"
#include "pathwise/path.hpp"

#include <string>
#include <utility>
#include <vector>

namespace pathwise {

enum class Scheme { semi_lagrangian, upwind_fv };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

/// The drift seen by the auxiliary equation: b_W(t, x) = b(t, x + W(t)).
class ComposedDrift {
public:
  ComposedDrift(const DriftField& b, const SamplePath& W) : b_(&b), W_(&W) {}
  // Holds references only.
  ComposedDrift(DriftField&&, const SamplePath&) = delete;
  ComposedDrift(const DriftField&, SamplePath&&) = delete;

  Vec shift(double t) const { return eval_path(*W_, t); }
  Vec operator()(double t, const Vec& x) const { return at(t, x, shift(t)); }
  /// b(t, x + w) for a precomputed w = W(t).
  Vec at(double t, const Vec& x, const Vec& w) const;

  const DriftField& drift() const { return *b_; }
  const SamplePath& path() const { return *W_; }

private:
  const DriftField* b_;
  const SamplePath* W_;
};

struct StepDiagnostics {
  /// Nodes whose backtracked foot left the inner 90% band of the box while
  /// carrying a non-negligible value.
  long support_warnings = 0;
  double max_cfl = 0.0;
};

/// Foot of the characteristic through (t + dt, x): one RK4 step of
/// dX/ds = b_W(s, X) backwards to time t.
Vec characteristic_foot(const ComposedDrift& bw, const Vec& x, double t, double dt);

/// One backward-characteristics step: RK4 backtrack of dX/ds = b_W(s, X)
/// from (t + dt, x) to t, then cubic interpolation at the foot, clamped to
/// the stencil range unless `clamped` is false.
ScalarField semi_lagrangian_step(const ScalarField& v, const ComposedDrift& bw, double t, double dt,
                                 StepDiagnostics* diag = nullptr, bool clamped = true);

/// First-order upwind update of v_t + b_W . grad v = 0 with velocities at
/// the nodes at time t. Throws ConfigurationError when
/// dt * sum_a |b_a| / h exceeds 0.9 at any node.
ScalarField upwind_fv_step(const ScalarField& v, const ComposedDrift& bw, double t, double dt,
                           StepDiagnostics* diag = nullptr);

inline constexpr double kMaxCfl = 0.9;

/// X(t1) for dX/ds = b(s, X + W(s)), X(t0) = x, by RK4 with substeps of at
/// most max_substep (t1 < t0 traces backwards). Throws NumericError when
/// |X| exceeds blowup_radius.
Vec characteristics_solve(const DriftField& b, const SamplePath& W, const Vec& x, double t0, double t1,
                          double max_substep, double blowup_radius);

struct TransportOptions {
  double dt = 0.0;
  double T = 0.0;
  Scheme scheme = Scheme::semi_lagrangian;
  /// Keep every k-th time level; must divide the step count.
  int snapshot_every = 1;
  /// > 0: replace b by its mollification of this radius before marching.
  double mollify_eps = 0.0;
  /// Semi-Lagrangian only. Unclamped cubic is fourth order in space but may
  /// overshoot the range of the data.
  bool clamp_cubic = true;
};

struct TransportSolution {
  explicit TransportSolution(SpatialGrid g) : grid(std::move(g)) {}

  SpatialGrid grid;
  std::vector<double> times;
  std::vector<ScalarField> snapshots;
  std::vector<int> snapshot_steps;
  Scheme scheme = Scheme::semi_lagrangian;
  std::string drift_id;
  std::string path_id;
  double dt = 0.0;
  int steps = 0;
  double mollify_eps = 0.0;
  long support_warnings = 0;
  double max_cfl = 0.0;
};

/// Number of steps T / dt; throws ConfigurationError unless it is an integer.
int step_count(double T, double dt);

/// Marches v_t + b(t, x + W(t)) . grad v = 0 from v(0) = u0.
TransportSolution solve_transport(const DriftField& b, const SamplePath& W, const ScalarField& u0,
                                  const TransportOptions& opt);

/// Largest dt * sum_a |b_a(t, x + W(t))| / h over nodes and step times.
double max_cfl_number(const DriftField& b, const SamplePath& W, const SpatialGrid& grid, double dt, double T);

/// Bound on how far characteristics can travel: int_0^T max_nodes |b| dt
/// (trapezoid over the step times) plus sup |W|.
double displacement_bound(const DriftField& b, const SamplePath& W, const SpatialGrid& grid, double dt, double T);

}  // namespace pathwise
