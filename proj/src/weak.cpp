#include "pathwise/weak.hpp"

#include "pathwise/csv.hpp"
#include "pathwise/errors.hpp"
#include "pathwise/rng.hpp"

#include <algorithm>
#include <cmath>

namespace pathwise {

double TestFunction::value(const Vec& x) const {
  double s2 = 0.0;
  for (int a = 0; a < dimension; ++a) s2 += (x[a] - center[a]) * (x[a] - center[a]);
  s2 /= radius * radius;
  if (s2 >= 1.0) return 0.0;
  return amplitude * std::exp(1.0 / (s2 - 1.0));
}

Vec TestFunction::gradient(const Vec& x) const {
  Vec g{};
  double s2 = 0.0;
  for (int a = 0; a < dimension; ++a) s2 += (x[a] - center[a]) * (x[a] - center[a]);
  s2 /= radius * radius;
  if (s2 >= 1.0) return g;
  const double e = amplitude * std::exp(1.0 / (s2 - 1.0));
  const double factor = -e / ((s2 - 1.0) * (s2 - 1.0)) * 2.0 / (radius * radius);
  for (int a = 0; a < dimension; ++a) g[a] = factor * (x[a] - center[a]);
  return g;
}

double TestFunction::sup() const { return std::abs(amplitude) * std::exp(-1.0); }

double TestFunction::gradient_sup() const {
  double m = 0.0;
  constexpr int kScan = 4000;
  for (int i = 1; i < kScan; ++i) {
    Vec x = center;
    x[0] += radius * i / kScan;
    m = std::max(m, std::abs(gradient(x)[0]));
  }
  return m;
}

std::vector<TestFunction> make_test_functions(const SpatialGrid& grid, int count, std::uint64_t seed) {
  if (count < 1) throw ConfigurationError("need at least one test function");
  const double h = grid.spacing();
  const double L = grid.half_width();
  const double r_min = 8.0 * h;
  const double r_max = std::max(r_min, 0.25 * L);
  if (r_max + 2.0 * h >= L) {
    throw ConfigurationError("box " + grid.describe() + " is too small for test functions of radius >= 8h");
  }
  constexpr std::uint32_t kStream = 0x7e57u;
  std::vector<TestFunction> out;
  std::uint64_t counter = 0;
  for (int j = 0; j < count; ++j) {
    TestFunction phi;
    phi.dimension = grid.dimension();
    phi.radius = r_min + (r_max - r_min) * keyed_uniform(seed, kStream, counter++);
    const double reach = L - phi.radius - 2.0 * h;
    for (int a = 0; a < grid.dimension(); ++a) {
      phi.center[a] = -reach + 2.0 * reach * keyed_uniform(seed, kStream, counter++);
    }
    out.push_back(phi);
  }
  return out;
}

double WeakResidualSeries::max_abs() const {
  double m = 0.0;
  for (double r : residual) m = std::max(m, std::abs(r));
  return m;
}

namespace {

struct SupportNode {
  std::size_t flat;
  Vec x;
  double phi;
  Vec grad;
};

std::vector<SupportNode> support_nodes(const SpatialGrid& g, const TestFunction& phi) {
  std::vector<SupportNode> nodes;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec x = g.node(i);
    const double v = phi.value(x);
    if (v == 0.0) continue;
    nodes.push_back({i, x, v, phi.gradient(x)});
  }
  return nodes;
}

void require_aligned(const SpdeSolution& sol, const SamplePath& B) {
  const auto& knots = B.times();
  const double tol = 1e-12 * std::max(1.0, B.horizon());
  for (double t : sol.times) {
    const auto it = std::lower_bound(knots.begin(), knots.end(), t - tol);
    if (it == knots.end() || std::abs(*it - t) > tol) {
      throw ConfigurationError("snapshot time " + std::to_string(t) + " is not a knot of the driving path");
    }
  }
}

WeakResidualSeries residual_core(const SpdeSolution& sol, const DriftField& b, const SamplePath& B,
                                 const TestFunction& phi, double p, StochasticRule rule) {
  require_aligned(sol, B);
  const SpatialGrid& g = sol.grid();
  const int d = g.dimension();
  const double cell = g.cell_volume();
  const auto nodes = support_nodes(g, phi);
  const double jitter = 1e-9 * b.reference_length;

  // Divergence at a node, stepping off declared singular points.
  const auto div_at = [&](double t, Vec x) {
    for (const Vec& s : b.singular_points) {
      double dist2 = 0.0;
      for (int a = 0; a < d; ++a) dist2 += (x[a] - s[a]) * (x[a] - s[a]);
      if (std::sqrt(dist2) < jitter) x[0] = s[0] + jitter;
    }
    return divergence_of(b, t, x).value;
  };

  const std::size_t M = sol.times.size();
  std::vector<double> A(M, 0.0), drift(M, 0.0), div(M, 0.0);
  std::vector<Vec> gsum(M, Vec{});
  for (std::size_t m = 0; m < M; ++m) {
    const ScalarField& u = sol.snapshots[m];
    const double t = sol.times[m];
    double a_sum = 0.0, d_sum = 0.0, v_sum = 0.0;
    Vec g_sum{};
    for (const SupportNode& n : nodes) {
      const double un = u[n.flat];
      if (un == 0.0) continue;
      a_sum += un * n.phi;
      const Vec bv = eval_drift(b, t, n.x);
      double bdot = 0.0;
      for (int a = 0; a < d; ++a) {
        bdot += bv[a] * n.grad[a];
        g_sum[a] += n.grad[a] * un;
      }
      d_sum += bdot * un;
      v_sum += div_at(t, n.x) * n.phi * un;
    }
    A[m] = a_sum * cell;
    drift[m] = d_sum * cell;
    div[m] = v_sum * cell;
    for (int a = 0; a < d; ++a) gsum[m][a] = g_sum[a] * cell;
  }

  WeakResidualSeries s;
  s.times = sol.times;
  s.term_initial = A[0];
  s.residual.assign(M, 0.0);
  s.term_drift.assign(M, 0.0);
  s.term_div.assign(M, 0.0);
  s.term_stoch.assign(M, 0.0);
  for (std::size_t m = 1; m < M; ++m) {
    const double ds = sol.times[m] - sol.times[m - 1];
    const Vec b0 = eval_path(B, sol.times[m - 1]);
    const Vec b1 = eval_path(B, sol.times[m]);
    double stoch = 0.0;
    for (int a = 0; a < d; ++a) {
      const double integrand = rule == StochasticRule::trapezoid ? 0.5 * (gsum[m - 1][a] + gsum[m][a]) : gsum[m - 1][a];
      stoch += integrand * (b1[a] - b0[a]);
    }
    s.term_drift[m] = s.term_drift[m - 1] + 0.5 * (drift[m - 1] + drift[m]) * ds;
    s.term_div[m] = s.term_div[m - 1] + 0.5 * (div[m - 1] + div[m]) * ds;
    s.term_stoch[m] = s.term_stoch[m - 1] + stoch;
    s.residual[m] = A[m] - A[0] - s.term_drift[m] - s.term_div[m] - s.term_stoch[m];
  }
  s.normalizer = lp_norm(sol.snapshots.front(), p) * (phi.sup() + phi.gradient_sup());
  return s;
}

}  // namespace

WeakResidualSeries weak_residual(const SpdeSolution& sol, const DriftField& b, const SamplePath& B,
                                 const TestFunction& phi, double p, StochasticRule rule) {
  return residual_core(sol, b, B, phi, p, rule);
}

WeakResidualSeries weak_residual_bv(const SpdeSolution& sol, const DriftField& b, const SamplePath& Bn,
                                    const TestFunction& phi, double p) {
  if (Bn.kind() == PathKind::brownian) {
    throw ConfigurationError("weak_residual_bv needs a bounded-variation (piecewise_linear_bv or zero) path");
  }
  return residual_core(sol, b, Bn, phi, p, StochasticRule::trapezoid);
}

WeakResidualReport summarize(std::vector<WeakResidualSeries> series) {
  WeakResidualReport r;
  double sq = 0.0;
  std::size_t count = 0;
  for (const auto& s : series) {
    for (double v : s.residual) {
      r.max_abs = std::max(r.max_abs, std::abs(v));
      sq += v * v;
      ++count;
    }
    if (s.normalizer > 0.0) r.max_normalized = std::max(r.max_normalized, s.max_abs() / s.normalizer);
  }
  r.rms = count ? std::sqrt(sq / count) : 0.0;
  r.series = std::move(series);
  return r;
}

std::string WeakResidualReport::to_csv() const {
  std::string out = "phi_index,t,residual,term_initial,term_drift,term_div,term_stoch,normalizer\n";
  for (std::size_t j = 0; j < series.size(); ++j) {
    const auto& s = series[j];
    for (std::size_t m = 0; m < s.times.size(); ++m) {
      out += std::to_string(j) + "," + csv::number(s.times[m]) + "," + csv::number(s.residual[m]) + "," +
             csv::number(s.term_initial) + "," + csv::number(s.term_drift[m]) + "," + csv::number(s.term_div[m]) +
             "," + csv::number(s.term_stoch[m]) + "," + csv::number(s.normalizer) + "\n";
    }
  }
  return out;
}

}  // namespace pathwise
