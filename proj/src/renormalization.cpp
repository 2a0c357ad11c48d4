#include "pathwise/renormalization.hpp"

#include "pathwise/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pathwise {

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "PASS";
    case CheckStatus::fail: return "FAIL";
    case CheckStatus::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

RenormalizationFn make_square() {
  RenormalizationFn f;
  f.id = "square";
  f.beta = [](double s) { return s * s; };
  f.beta_prime = [](double s) { return 2.0 * s; };
  f.p = 2.0;
  f.derivative_bound = std::numeric_limits<double>::infinity();
  return f;
}

RenormalizationFn make_smoothed_truncation(double M, double p, double zero_width) {
  if (!(M > 0.0)) throw ConfigurationError("truncation level M must be positive");
  if (!(p >= 1.0)) throw ConfigurationError("truncation exponent p must be >= 1");
  const double delta = 1e-3 * M;
  const double w = p == 1.0 ? (zero_width > 0.0 ? zero_width : 1e-6 * M) : 0.0;

  // Core |s|^p (Huber-like near 0 when p == 1) and its derivative in r = |s|.
  const auto core = [p, w](double r) {
    if (p == 1.0) return r < w ? r * r / (2.0 * w) : r - 0.5 * w;
    return std::pow(r, p);
  };
  const auto core_prime = [p, w](double r) {
    if (p == 1.0) return r < w ? r / w : 1.0;
    return p * std::pow(r, p - 1.0);
  };
  const double r0 = M - delta;
  const double c0 = core(r0);
  const double s0 = core_prime(r0);
  const auto g = [=](double r) {
    if (r <= r0) return core(r);
    const double x = std::min(r, M + delta) - r0;
    return c0 + s0 * x - s0 * x * x / (4.0 * delta);
  };
  const auto g_prime = [=](double r) {
    if (r <= r0) return core_prime(r);
    if (r >= M + delta) return 0.0;
    const double x = r - r0;
    return s0 - s0 * x / (2.0 * delta);
  };

  RenormalizationFn f;
  f.id = "smoothed_truncation";
  f.beta = [g](double s) { return g(std::abs(s)); };
  f.beta_prime = [g_prime](double s) { return std::copysign(g_prime(std::abs(s)), s); };
  f.M = M;
  f.p = p;
  f.delta_M = delta;
  f.zero_width = w;
  f.derivative_bound = s0;
  return f;
}

bool derivative_is_bounded(const RenormalizationFn& f, double range, int samples) {
  const double fd_step = 1e-7 * range;
  for (int i = 0; i <= samples; ++i) {
    const double s = -range + 2.0 * range * i / samples;
    const double d = f.beta_prime(s);
    if (!(std::abs(d) <= f.derivative_bound * (1.0 + 1e-12))) return false;
    const double fd = (f.beta(s + fd_step) - f.beta(s - fd_step)) / (2.0 * fd_step);
    if (std::abs(fd - d) > 1e-4 * std::max(1.0, f.derivative_bound)) return false;
  }
  return true;
}

RenormalizationReport renormalize_check(const SpdeSolution& sol, const RenormalizationFn& beta,
                                        const HypothesisReport& hypotheses) {
  const TransportSolution& v = sol.underlying;
  RenormalizationReport r;
  r.C = hypotheses.div_bound.value;
  r.times = v.times;
  const double h = v.grid.spacing();
  r.tolerance = h / v.grid.half_width() + v.dt;
  // C integrates sup |div b| over the audit horizon; the exponent uses its
  // mean rate, which is C itself on the unit horizon.
  r.rate = r.C / hypotheses.T;
  r.delta = 0.1 * r.rate + r.tolerance;

  for (std::size_t m = 1; hypotheses.div_bound.ok && m < v.times.size(); ++m) {
    if ((v.times[m] - v.times[m - 1]) * r.rate >= 0.1) {
      throw ConfigurationError("snapshot spacing too coarse for the Gronwall check: spacing * C >= 0.1");
    }
  }

  const double cell = v.grid.cell_volume();
  for (const ScalarField& f : v.snapshots) {
    double s = 0.0;
    for (double x : f.values()) s += beta.beta(x);
    r.integral.push_back(s * cell);
  }
  const double i0 = r.integral.front();
  r.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < r.times.size(); ++m) {
    r.envelope.push_back(i0 * std::exp((r.rate + r.delta) * r.times[m]));
    r.max_violation = std::max(r.max_violation, r.integral[m] - r.envelope[m]);
  }

  if (!hypotheses.div_bound.ok) {
    r.status = CheckStatus::inconclusive;
    r.note = "divergence bound C failed its finiteness check";
  } else {
    r.status = r.max_violation <= 0.0 ? CheckStatus::pass : CheckStatus::fail;
  }
  return r;
}

}  // namespace pathwise
