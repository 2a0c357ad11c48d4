#pragma once

#include "pathwise/spde.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pathwise {

/// Smooth bump a * exp(1 / (|x - c|^2 / r^2 - 1)) on |x - c| < r.
struct TestFunction {
  int dimension = 1;
  Vec center{};
  double radius = 1.0;
  double amplitude = 1.0;

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  /// a / e, attained at the center.
  double sup() const;
  /// max |grad phi| (Euclidean), from a dense radial scan.
  double gradient_sup() const;
};

/// Deterministic bumps with radius >= 8h and support at least 2h inside the
/// box. Throws ConfigurationError when the box is too small.
std::vector<TestFunction> make_test_functions(const SpatialGrid& grid, int count, std::uint64_t seed);

/// How the stochastic integral against the path is discretized.
enum class StochasticRule {
  /// Average of the endpoint integrands times the increment. This is the
  /// Fisk-Stratonovich sum for Brownian paths and the Riemann-Stieltjes
  /// trapezoid sum for bounded-variation paths.
  trapezoid,
  /// Left endpoint (Ito) sum.
  left_point,
};

/// Residual time series of the weak identity for one test function:
/// r(t) = A(t) - A(0) - Drift(t) - Div(t) - Stoch(t), A(t) = int u phi.
struct WeakResidualSeries {
  std::vector<double> times;
  std::vector<double> residual;
  double term_initial = 0.0;
  std::vector<double> term_drift;
  std::vector<double> term_div;
  std::vector<double> term_stoch;
  /// ||u0||_p * (||phi||_inf + ||grad phi||_inf).
  double normalizer = 0.0;

  double max_abs() const;
};

/// Weak identity with the Stratonovich term (or its Ito counterpart when
/// asked). Snapshot times must be knots of B.
WeakResidualSeries weak_residual(const SpdeSolution& sol, const DriftField& b, const SamplePath& B,
                                 const TestFunction& phi, double p,
                                 StochasticRule rule = StochasticRule::trapezoid);

/// Weak identity for a bounded-variation driver (kind piecewise_linear_bv or zero).
WeakResidualSeries weak_residual_bv(const SpdeSolution& sol, const DriftField& b, const SamplePath& Bn,
                                    const TestFunction& phi, double p);

struct WeakResidualReport {
  std::vector<WeakResidualSeries> series;
  double max_abs = 0.0;
  double rms = 0.0;
  /// max_j max_t |r_j(t)| / normalizer_j (0 when every normalizer is 0).
  double max_normalized = 0.0;

  /// `phi_index,t,residual,term_initial,term_drift,term_div,term_stoch,normalizer`.
  std::string to_csv() const;
};

WeakResidualReport summarize(std::vector<WeakResidualSeries> series);

}  // namespace pathwise
