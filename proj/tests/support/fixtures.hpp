#pragma once

// Closed-form trajectories packaged as solver output, for feeding verifiers.

#include "pathwise/analytic.hpp"
#include "pathwise/spde.hpp"

namespace fixture {

/// u(t, x) = u0(x - W(t)) sampled analytically at every knot of W; the
/// auxiliary field is u0 itself.
inline pathwise::SpdeSolution translated_solution(const pathwise::SpatialGrid& grid, const pathwise::AnalyticField& u0,
                                                  const pathwise::SamplePath& W, double p) {
  using namespace pathwise;
  TransportSolution v(grid);
  SpdeSolution sol{.times = W.times(), .snapshots = {}, .path = W, .underlying = v, .p = p};
  const ScalarField base = sample(grid, u0);
  for (std::size_t k = 0; k < W.times().size(); ++k) {
    sol.snapshots.push_back(sample(grid, u0, W.values()[k]));
    sol.underlying.times.push_back(W.times()[k]);
    sol.underlying.snapshots.push_back(base);
    sol.underlying.snapshot_steps.push_back(static_cast<int>(k));
  }
  sol.underlying.dt = W.horizon() / W.steps();
  sol.underlying.steps = W.steps();
  return sol;
}

}  // namespace fixture
