#pragma once

#include "pathwise/analytic.hpp"
#include "pathwise/transport.hpp"

namespace pathwise {

/// u(s_m, x) = v(s_m, x - W(s_m)) for the auxiliary solution v driven by W.
struct SpdeSolution {
  std::vector<double> times;
  std::vector<ScalarField> snapshots;
  SamplePath path;
  TransportSolution underlying;
  double p = 2.0;

  const SpatialGrid& grid() const { return underlying.grid; }
};

struct SpdeOptions {
  TransportOptions transport;
  double p = 2.0;
  Interpolation shift_order = Interpolation::cubic;
};

/// Solution of du + b . grad u dt + grad u o dB = 0 through the auxiliary
/// transport problem. B must be brownian or zero.
SpdeSolution solve_spde(const DriftField& b, const SamplePath& B, const ScalarField& u0, const SpdeOptions& opt);

/// Same pipeline driven by a bounded-variation approximant B_n (kind
/// piecewise_linear_bv or zero).
SpdeSolution solve_spde_wong_zakai(const DriftField& b, const SamplePath& Bn, const ScalarField& u0,
                                   const SpdeOptions& opt);

/// Samples u0(x - c t - B(t)) directly; b must be the zero or a constant
/// catalog drift. Lattice displacements rotate the sampled u0 exactly.
ScalarField exact_solution(const DriftField& b, const SamplePath& B, const AnalyticField& u0, const SpatialGrid& grid,
                           double t);

/// max_m || u(s_{m+1}) - u(s_m) ||_p over adjacent snapshots (>= 3 needed).
double time_continuity_modulus(const SpdeSolution& sol, double p);

/// Keeps every k-th snapshot (always including the first).
SpdeSolution subsample(const SpdeSolution& sol, int every);

}  // namespace pathwise
