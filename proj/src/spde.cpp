#include "pathwise/spde.hpp"

#include "pathwise/errors.hpp"

#include <cmath>

namespace pathwise {

namespace {

SpdeSolution compose(const SamplePath& W, TransportSolution v, const SpdeOptions& opt) {
  SpdeSolution sol{.times = v.times, .snapshots = {}, .path = W, .underlying = std::move(v), .p = opt.p};
  sol.snapshots.reserve(sol.times.size());
  for (std::size_t m = 0; m < sol.times.size(); ++m) {
    sol.snapshots.push_back(
        shift_field(sol.underlying.snapshots[m], eval_path(W, sol.times[m]), opt.shift_order));
  }
  return sol;
}

}  // namespace

SpdeSolution solve_spde(const DriftField& b, const SamplePath& B, const ScalarField& u0, const SpdeOptions& opt) {
  if (B.kind() == PathKind::piecewise_linear_bv) {
    throw ConfigurationError("solve_spde expects a brownian or zero path; use solve_spde_wong_zakai for approximants");
  }
  return compose(B, solve_transport(b, B, u0, opt.transport), opt);
}

SpdeSolution solve_spde_wong_zakai(const DriftField& b, const SamplePath& Bn, const ScalarField& u0,
                                   const SpdeOptions& opt) {
  if (Bn.kind() == PathKind::brownian) {
    throw ConfigurationError("solve_spde_wong_zakai expects a piecewise_linear_bv or zero path");
  }
  return compose(Bn, solve_transport(b, Bn, u0, opt.transport), opt);
}

ScalarField exact_solution(const DriftField& b, const SamplePath& B, const AnalyticField& u0, const SpatialGrid& grid,
                           double t) {
  if (b.id != "constant" && b.id != "zero") {
    throw ConfigurationError("exact solution is only available for zero or constant drift, not '" + b.id + "'");
  }
  const Vec c = eval_drift(b, 0.0, Vec{});
  const Vec w = eval_path(B, t);
  Vec shift{};
  bool lattice = true;
  for (int a = 0; a < grid.dimension(); ++a) {
    shift[a] = c[a] * t + w[a];
    const double s = shift[a] / grid.spacing();
    lattice = lattice && std::abs(s - std::nearbyint(s)) <= 1e-12 * std::max(1.0, std::abs(s));
  }
  if (lattice) return shift_field(sample(grid, u0), shift);
  return sample(grid, u0, shift);
}

double time_continuity_modulus(const SpdeSolution& sol, double p) {
  if (sol.snapshots.size() < 3) throw ConfigurationError("time continuity modulus needs at least 3 snapshots");
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < sol.snapshots.size(); ++k) {
    m = std::max(m, lp_distance(sol.snapshots[k + 1], sol.snapshots[k], p));
  }
  return m;
}

SpdeSolution subsample(const SpdeSolution& sol, int every) {
  if (every < 1) throw ConfigurationError("subsample stride must be positive");
  SpdeSolution out{.times = {}, .snapshots = {}, .path = sol.path, .underlying = sol.underlying, .p = sol.p};
  out.underlying.times.clear();
  out.underlying.snapshots.clear();
  out.underlying.snapshot_steps.clear();
  for (std::size_t m = 0; m < sol.times.size(); m += static_cast<std::size_t>(every)) {
    out.times.push_back(sol.times[m]);
    out.snapshots.push_back(sol.snapshots[m]);
    out.underlying.times.push_back(sol.underlying.times[m]);
    out.underlying.snapshots.push_back(sol.underlying.snapshots[m]);
    out.underlying.snapshot_steps.push_back(sol.underlying.snapshot_steps[m]);
  }
  return out;
}

}  // namespace pathwise
