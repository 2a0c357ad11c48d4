#pragma once

#include "pathwise/hypotheses.hpp"
#include "pathwise/spde.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pathwise {

/// C^1 renormalization function with a bounded derivative.
struct RenormalizationFn {
  std::string id;
  std::function<double(double)> beta;
  std::function<double(double)> beta_prime;
  double M = 0.0;
  double p = 1.0;
  /// Width of the C^1 blend onto the plateau M^p.
  double delta_M = 0.0;
  /// Width of the quadratic core replacing |s| near 0 (p == 1 only).
  double zero_width = 0.0;
  double derivative_bound = 0.0;
};

/// beta(s) = s^2.
RenormalizationFn make_square();

/// Smoothed truncation (|s| ^ M)^p: |s|^p up to M - delta_M, a quadratic
/// blend with zero slope at M + delta_M, then constant. For p = 1 the kink at
/// 0 becomes s^2 / (2 w) on |s| < w with w = zero_width (default 1e-6 M).
/// delta_M = 1e-3 M.
RenormalizationFn make_smoothed_truncation(double M, double p, double zero_width = -1.0);

/// Samples beta' on [-range, range] and checks |beta'| <= derivative_bound
/// and beta' against centered differences of beta.
bool derivative_is_bounded(const RenormalizationFn& f, double range, int samples);

enum class CheckStatus { pass, fail, inconclusive };
std::string to_string(CheckStatus s);

struct RenormalizationReport {
  std::vector<double> times;
  /// I(t) = int beta(v(t, x)) dx on the auxiliary (unshifted) solution.
  std::vector<double> integral;
  /// I(0) exp((rate + delta) t).
  std::vector<double> envelope;
  double C = 0.0;
  /// C divided by the audit horizon T.
  double rate = 0.0;
  double delta = 0.0;
  double tolerance = 0.0;
  /// max_m I(s_m) - envelope(s_m); <= 0 when the inequality holds.
  double max_violation = 0.0;
  CheckStatus status = CheckStatus::inconclusive;
  std::string note;
};

/// Discrete Gronwall check I(t) <= I(0) exp((rate + delta) t) with
/// rate = C / T, delta = 0.1 rate + tol, tol = h / L + dt. C and T come from
/// the hypothesis report; a C that failed its finiteness check makes the
/// result inconclusive. Otherwise throws ConfigurationError when the snapshot
/// spacing times the rate is >= 0.1.
RenormalizationReport renormalize_check(const SpdeSolution& sol, const RenormalizationFn& beta,
                                        const HypothesisReport& hypotheses);

}  // namespace pathwise
