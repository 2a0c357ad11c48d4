#include "pathwise/transport.hpp"

#include "pathwise/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pathwise {

std::string to_string(Scheme s) {
  return s == Scheme::semi_lagrangian ? "semi_lagrangian" : "upwind_fv";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "semi_lagrangian") return Scheme::semi_lagrangian;
  if (s == "upwind_fv") return Scheme::upwind_fv;
  throw ConfigurationError("unknown scheme '" + s + "' (expected semi_lagrangian or upwind_fv)");
}

Vec ComposedDrift::at(double t, const Vec& x, const Vec& w) const {
  Vec y = x;
  for (int a = 0; a < b_->dimension; ++a) y[a] += w[a];
  return eval_drift(*b_, t, y);
}

namespace {

// Shifts W at the three RK4 stage times, evaluated once per step.
struct StageShifts {
  Vec start;
  Vec mid;
  Vec end;
};

Vec rk4_foot(const ComposedDrift& bw, const Vec& x, double t, double dt, const StageShifts& w, int d) {
  const Vec k1 = bw.at(t + dt, x, w.end);
  Vec y = x;
  for (int a = 0; a < d; ++a) y[a] = x[a] - 0.5 * dt * k1[a];
  const Vec k2 = bw.at(t + 0.5 * dt, y, w.mid);
  for (int a = 0; a < d; ++a) y[a] = x[a] - 0.5 * dt * k2[a];
  const Vec k3 = bw.at(t + 0.5 * dt, y, w.mid);
  for (int a = 0; a < d; ++a) y[a] = x[a] - dt * k3[a];
  const Vec k4 = bw.at(t, y, w.start);
  Vec foot = x;
  for (int a = 0; a < d; ++a) foot[a] = x[a] - dt / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
  return foot;
}

StageShifts stage_shifts(const ComposedDrift& bw, double t, double dt) {
  return {bw.shift(t), bw.shift(t + 0.5 * dt), bw.shift(t + dt)};
}

}  // namespace

Vec characteristic_foot(const ComposedDrift& bw, const Vec& x, double t, double dt) {
  return rk4_foot(bw, x, t, dt, stage_shifts(bw, t, dt), bw.drift().dimension);
}

ScalarField semi_lagrangian_step(const ScalarField& v, const ComposedDrift& bw, double t, double dt,
                                 StepDiagnostics* diag, bool clamped) {
  const SpatialGrid& g = v.grid();
  const int d = g.dimension();
  const double band = 0.9 * g.half_width();
  const double negligible = 1e-12 * v.max_abs();
  const StageShifts w = stage_shifts(bw, t, dt);

  std::vector<double> out(g.size());
  long warnings = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec foot = rk4_foot(bw, g.node(i), t, dt, w, d);
    bool outside = false;
    for (int a = 0; a < d; ++a) outside = outside || std::abs(foot[a]) > band;
    out[i] = clamped ? interpolate_clamped(v, foot) : interpolate(v, foot, Interpolation::cubic);
    if (outside && std::abs(out[i]) > negligible) ++warnings;
  }
  if (diag) diag->support_warnings += warnings;
  return ScalarField(g, std::move(out));
}

ScalarField upwind_fv_step(const ScalarField& v, const ComposedDrift& bw, double t, double dt,
                           StepDiagnostics* diag) {
  const SpatialGrid& g = v.grid();
  const int d = g.dimension();
  const int N = g.points_per_axis();
  const double h = g.spacing();
  const Vec w = bw.shift(t);

  std::array<std::size_t, kMaxDim> stride{};
  {
    std::size_t s = 1;
    for (int a = d - 1; a >= 0; --a) {
      stride[a] = s;
      s *= static_cast<std::size_t>(N);
    }
  }

  std::vector<double> out(g.size());
  double max_cfl = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.multi_index(i);
    const Vec vel = bw.at(t, g.node(i), w);
    double cfl = 0.0;
    double update = 0.0;
    for (int a = 0; a < d; ++a) {
      cfl += std::abs(vel[a]) * dt / h;
      const std::size_t base = i - static_cast<std::size_t>(idx[a]) * stride[a];
      const double vm = v[base + static_cast<std::size_t>(g.wrap_index(idx[a] - 1)) * stride[a]];
      const double vp = v[base + static_cast<std::size_t>(g.wrap_index(idx[a] + 1)) * stride[a]];
      if (vel[a] > 0.0) update += vel[a] * (v[i] - vm) / h;
      else if (vel[a] < 0.0) update += vel[a] * (vp - v[i]) / h;
    }
    if (cfl > kMaxCfl * (1.0 + 1e-12)) {
      throw ConfigurationError("CFL number " + std::to_string(cfl) + " exceeds " + std::to_string(kMaxCfl) +
                               " at t=" + std::to_string(t) + "; reduce dt or refine less");
    }
    max_cfl = std::max(max_cfl, cfl);
    out[i] = v[i] - dt * update;
  }
  if (diag) diag->max_cfl = std::max(diag->max_cfl, max_cfl);
  return ScalarField(g, std::move(out));
}

Vec characteristics_solve(const DriftField& b, const SamplePath& W, const Vec& x, double t0, double t1,
                          double max_substep, double blowup_radius) {
  if (!(max_substep > 0.0)) throw ConfigurationError("characteristics need a positive substep");
  const double span = t1 - t0;
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(span) / max_substep - 1e-12)));
  const double ds = span / n;
  const ComposedDrift bw(b, W);
  const int d = b.dimension;
  Vec X = x;
  for (int k = 0; k < n; ++k) {
    const double s = t0 + ds * k;
    const Vec k1 = bw(s, X);
    Vec y = X;
    for (int a = 0; a < d; ++a) y[a] = X[a] + 0.5 * ds * k1[a];
    const Vec k2 = bw(s + 0.5 * ds, y);
    for (int a = 0; a < d; ++a) y[a] = X[a] + 0.5 * ds * k2[a];
    const Vec k3 = bw(s + 0.5 * ds, y);
    for (int a = 0; a < d; ++a) y[a] = X[a] + ds * k3[a];
    const Vec k4 = bw(k + 1 == n ? t1 : s + ds, y);
    for (int a = 0; a < d; ++a) {
      X[a] += ds / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
      if (!(std::abs(X[a]) <= blowup_radius)) {
        throw NumericError("characteristic left the ball of radius " + std::to_string(blowup_radius));
      }
    }
  }
  return X;
}

int step_count(double T, double dt) {
  if (!(dt > 0.0) || !(T > 0.0)) throw ConfigurationError("dt and T must be positive");
  const double r = T / dt;
  const double n = std::nearbyint(r);
  if (n < 1.0 || std::abs(r - n) > 1e-9 * std::max(1.0, r)) {
    throw ConfigurationError("dt=" + std::to_string(dt) + " does not divide T=" + std::to_string(T));
  }
  return static_cast<int>(n);
}

TransportSolution solve_transport(const DriftField& b, const SamplePath& W, const ScalarField& u0,
                                  const TransportOptions& opt) {
  const SpatialGrid& g = u0.grid();
  if (b.dimension != g.dimension()) throw ConfigurationError("drift dimension does not match grid");
  if (W.dimension() != g.dimension()) throw ConfigurationError("path dimension does not match grid");
  const int steps = step_count(opt.T, opt.dt);
  if (opt.snapshot_every < 1 || steps % opt.snapshot_every != 0) {
    throw ConfigurationError("snapshot spacing must divide the step count " + std::to_string(steps));
  }
  if (W.horizon() < opt.T * (1.0 - 1e-12)) throw ConfigurationError("path does not cover [0, T]");

  const DriftField marched = opt.mollify_eps > 0.0 ? make_mollified(b, opt.mollify_eps) : b;
  const ComposedDrift bw(marched, W);

  TransportSolution sol(g);
  sol.scheme = opt.scheme;
  sol.drift_id = marched.id;
  sol.path_id = W.label();
  sol.dt = opt.dt;
  sol.steps = steps;
  sol.mollify_eps = opt.mollify_eps;
  sol.times.push_back(0.0);
  sol.snapshots.push_back(u0);
  sol.snapshot_steps.push_back(0);

  StepDiagnostics diag;
  ScalarField v = u0;
  for (int k = 0; k < steps; ++k) {
    const double t = opt.T * k / steps;
    const double t_next = opt.T * (k + 1) / steps;
    const double dt = t_next - t;
    try {
      v = opt.scheme == Scheme::semi_lagrangian ? semi_lagrangian_step(v, bw, t, dt, &diag, opt.clamp_cubic)
                                                : upwind_fv_step(v, bw, t, dt, &diag);
    } catch (const InvalidFieldError&) {
      throw NumericError("non-finite field after step " + std::to_string(k + 1));
    }
    if ((k + 1) % opt.snapshot_every == 0) {
      sol.times.push_back(t_next);
      sol.snapshots.push_back(v);
      sol.snapshot_steps.push_back(k + 1);
    }
  }
  sol.support_warnings = diag.support_warnings;
  sol.max_cfl = diag.max_cfl;
  return sol;
}

double max_cfl_number(const DriftField& b, const SamplePath& W, const SpatialGrid& grid, double dt, double T) {
  const int steps = step_count(T, dt);
  const ComposedDrift bw(b, W);
  double m = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double t = T * k / steps;
    const Vec w = bw.shift(t);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Vec v = bw.at(t, grid.node(i), w);
      double s = 0.0;
      for (int a = 0; a < grid.dimension(); ++a) s += std::abs(v[a]);
      m = std::max(m, s * dt / grid.spacing());
    }
  }
  return m;
}

double displacement_bound(const DriftField& b, const SamplePath& W, const SpatialGrid& grid, double dt, double T) {
  const int steps = step_count(T, dt);
  std::vector<double> speed(steps + 1, 0.0);
  for (int k = 0; k <= steps; ++k) {
    const double t = T * k / steps;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Vec v = eval_drift(b, t, grid.node(i));
      double s = 0.0;
      for (int a = 0; a < grid.dimension(); ++a) s = std::max(s, std::abs(v[a]));
      speed[k] = std::max(speed[k], s);
    }
  }
  double integral = 0.0;
  for (int k = 0; k < steps; ++k) integral += 0.5 * (speed[k] + speed[k + 1]) * (T / steps);
  return integral + sup_norm(W);
}

}  // namespace pathwise
