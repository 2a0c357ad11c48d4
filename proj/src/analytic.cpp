#include "pathwise/analytic.hpp"

#include "pathwise/errors.hpp"

#include <cmath>
#include <numbers>

namespace pathwise {

AnalyticField make_bump(int d, const Vec& center, double radius, double amplitude) {
  if (!(radius > 0.0)) throw ConfigurationError("bump radius must be positive");
  AnalyticField f;
  f.id = "bump";
  f.dimension = d;
  f.value = [=](const Vec& x) {
    double s2 = 0.0;
    for (int a = 0; a < d; ++a) s2 += (x[a] - center[a]) * (x[a] - center[a]);
    s2 /= radius * radius;
    if (s2 >= 1.0) return 0.0;
    return amplitude * std::exp(s2 / (s2 - 1.0));
  };
  f.gradient = [=](const Vec& x) {
    Vec g{};
    double s2 = 0.0;
    for (int a = 0; a < d; ++a) s2 += (x[a] - center[a]) * (x[a] - center[a]);
    s2 /= radius * radius;
    if (s2 >= 1.0) return g;
    const double e = amplitude * std::exp(s2 / (s2 - 1.0));
    // d/ds2 [s2/(s2-1)] = -1/(s2-1)^2
    const double ds2 = -e / ((s2 - 1.0) * (s2 - 1.0));
    for (int a = 0; a < d; ++a) g[a] = ds2 * 2.0 * (x[a] - center[a]) / (radius * radius);
    return g;
  };
  Box b;
  b.dimension = d;
  for (int a = 0; a < d; ++a) {
    b.lo[a] = center[a] - radius;
    b.hi[a] = center[a] + radius;
  }
  f.support = b;
  return f;
}

AnalyticField make_double_bump(int d, const Vec& c1, const Vec& c2, double radius, double a1, double a2) {
  const AnalyticField b1 = make_bump(d, c1, radius, a1);
  const AnalyticField b2 = make_bump(d, c2, radius, a2);
  AnalyticField f;
  f.id = "double_bump";
  f.dimension = d;
  f.value = [=](const Vec& x) { return b1.value(x) + b2.value(x); };
  f.gradient = [=](const Vec& x) {
    Vec g1 = b1.gradient(x);
    const Vec g2 = b2.gradient(x);
    for (int a = 0; a < d; ++a) g1[a] += g2[a];
    return g1;
  };
  Box b;
  b.dimension = d;
  for (int a = 0; a < d; ++a) {
    b.lo[a] = std::min(b1.support->lo[a], b2.support->lo[a]);
    b.hi[a] = std::max(b1.support->hi[a], b2.support->hi[a]);
  }
  f.support = b;
  return f;
}

AnalyticField make_step(int d, double lo, double hi, double amplitude) {
  if (!(hi > lo)) throw ConfigurationError("step needs lo < hi");
  AnalyticField f;
  f.id = "step";
  f.dimension = d;
  f.value = [=](const Vec& x) {
    for (int a = 0; a < d; ++a) {
      if (x[a] < lo || x[a] >= hi) return 0.0;
    }
    return amplitude;
  };
  Box b;
  b.dimension = d;
  for (int a = 0; a < d; ++a) {
    b.lo[a] = lo;
    b.hi[a] = hi;
  }
  f.support = b;
  return f;
}

AnalyticField make_sinusoid(int d, double half_width, int wavenumber, double amplitude) {
  const double k = std::numbers::pi * wavenumber / half_width;
  AnalyticField f;
  f.id = "sinusoid";
  f.dimension = d;
  f.value = [=](const Vec& x) {
    double v = amplitude;
    for (int a = 0; a < d; ++a) v *= std::sin(k * x[a]);
    return v;
  };
  f.gradient = [=](const Vec& x) {
    Vec g{};
    for (int a = 0; a < d; ++a) {
      double v = amplitude * k * std::cos(k * x[a]);
      for (int b = 0; b < d; ++b) {
        if (b != a) v *= std::sin(k * x[b]);
      }
      g[a] = v;
    }
    return g;
  };
  return f;
}

ScalarField sample(const SpatialGrid& grid, const AnalyticField& f, const Vec& shift) {
  if (f.dimension != grid.dimension()) throw ConfigurationError("initial data dimension does not match grid");
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Vec x = grid.node(i);
    for (int a = 0; a < grid.dimension(); ++a) {
      if (shift[a] != 0.0) x[a] = grid.wrap(x[a] - shift[a]);
    }
    v[i] = f.value(x);
  }
  return ScalarField(grid, std::move(v));
}

ScalarField sample_gradient_magnitude(const SpatialGrid& grid, const AnalyticField& f) {
  if (!f.gradient) throw ConfigurationError("initial data '" + f.id + "' has no analytic gradient");
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec g = f.gradient(grid.node(i));
    double s = 0.0;
    for (int a = 0; a < grid.dimension(); ++a) s += std::abs(g[a]);
    v[i] = s;
  }
  return ScalarField(grid, std::move(v));
}

}  // namespace pathwise
