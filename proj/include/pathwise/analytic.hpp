#pragma once

#include "pathwise/field.hpp"

#include <functional>
#include <optional>
#include <string>

namespace pathwise {

/// Closed-form initial data u0 with an analytic gradient where it exists.
struct AnalyticField {
  std::string id;
  int dimension = 1;
  std::function<double(const Vec&)> value;
  /// Absent for discontinuous data (step).
  std::function<Vec(const Vec&)> gradient;
  /// Bounding box of the support; absent for data that fill the box (sinusoid).
  std::optional<Box> support;
};

/// C-infinity bump a*exp(s^2/(s^2-1)), s = |x-c|/r; peak value a at the center.
AnalyticField make_bump(int d, const Vec& center, double radius, double amplitude = 1.0);
/// Sum of two bumps.
AnalyticField make_double_bump(int d, const Vec& c1, const Vec& c2, double radius, double a1 = 1.0,
                               double a2 = 1.0);
/// amplitude times the indicator of [lo, hi)^d.
AnalyticField make_step(int d, double lo, double hi, double amplitude = 1.0);
/// amplitude * prod_a sin(pi k x_a / L); periodic on the box.
AnalyticField make_sinusoid(int d, double half_width, int wavenumber, double amplitude = 1.0);

/// Samples f(wrap(x - shift)) at every node.
ScalarField sample(const SpatialGrid& grid, const AnalyticField& f, const Vec& shift = {});

/// Samples the l1 magnitude sum_a |d_a f| of the gradient (f must have one).
ScalarField sample_gradient_magnitude(const SpatialGrid& grid, const AnalyticField& f);

}  // namespace pathwise
