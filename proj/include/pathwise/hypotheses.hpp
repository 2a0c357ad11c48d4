#pragma once

#include "pathwise/drift.hpp"

#include <string>
#include <vector>

namespace pathwise {

/// Evidence that a quantity is finite: value at `samples`, value at twice
/// that, and the verdict (below threshold and stable within 5% under doubling).
struct Evidence {
  double value = 0.0;
  double doubled = 0.0;
  bool ok = false;

  double relative_change() const;
};

/// Numerical audit of the drift hypotheses used by the existence and
/// uniqueness results. Finiteness is undecidable from samples, so every
/// verdict is heuristic: evidence < 1e12 and stable under sample doubling.
struct HypothesisReport {
  /// C = int_0^T sup_x |div b| dt over the window (Gronwall constant).
  Evidence div_bound;
  /// int_0^T int_window |b|^q (sup over the window when q is infinite).
  Evidence lq_loc;
  /// Same with the Frobenius norm of the Jacobian.
  Evidence w1q_loc;
  /// max over window and time of |b| / (1 + |x|).
  Evidence growth;
  double q_used = 2.0;
  Box window;
  double T = 1.0;
  int samples = 0;
  bool used_approximate_derivatives = false;

  bool uniqueness_hypotheses_ok() const { return div_bound.ok && w1q_loc.ok && growth.ok; }

  /// Rows `check,ok,evidence,threshold`.
  std::string to_csv() const;
};

inline constexpr double kFinitenessThreshold = 1e12;
inline constexpr double kStabilityTolerance = 0.05;
inline constexpr int kHypothesisTimeSlices = 17;

/// Deterministic: shifted Hammersley points in the window (stratified first
/// axis, so the closest approach to any point shrinks like 1/samples) and a
/// trapezoid over 17 time slices. Points within 1e-9 * reference_length of a declared singular point
/// are pushed off it by that distance.
HypothesisReport check_hypotheses(const DriftField& b, double q, const Box& window, double T, int samples);

/// Radical inverse of i in the given base (van der Corput).
double radical_inverse(unsigned long long i, unsigned base);

}  // namespace pathwise
