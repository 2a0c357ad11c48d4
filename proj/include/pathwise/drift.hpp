#pragma once

#include "pathwise/grid.hpp"

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace pathwise {

/// J[i][j] = d b_i / d x_j.
using Jacobian = std::array<Vec, kMaxDim>;

using VectorRule = std::function<Vec(double t, const Vec& x)>;
using ScalarRule = std::function<double(double t, const Vec& x)>;
using JacobianRule = std::function<Jacobian(double t, const Vec& x)>;

/// Time-dependent drift b(t, x) with optional analytic derivatives.
///
/// Regularity tags in use: smooth, lipschitz, sobolev_w1q, divergence_free,
/// mollified, time_modulated.
struct DriftField {
  std::string id;
  int dimension = 1;
  VectorRule eval;
  ScalarRule divergence;    // empty: centered differences
  JacobianRule jacobian;    // empty: centered differences
  std::set<std::string> tags;
  /// Measure-zero sets where derivatives blow up; samplers jitter off them.
  std::vector<Vec> singular_points;
  /// Length scale for the finite-difference step (1e-4 of it).
  double reference_length = 1.0;

  bool has_tag(const std::string& t) const { return tags.count(t) != 0; }
  bool is_smooth() const { return has_tag("smooth"); }
};

struct DivergenceValue {
  double value = 0.0;
  bool approximate = false;
};

struct JacobianValue {
  Jacobian value{};
  bool approximate = false;
};

/// Throws DriftEvaluationError with the (t, x) context on non-finite output.
Vec eval_drift(const DriftField& b, double t, const Vec& x);
DivergenceValue divergence_of(const DriftField& b, double t, const Vec& x);
JacobianValue jacobian_of(const DriftField& b, double t, const Vec& x);

// Catalog.
DriftField make_constant_drift(int d, const Vec& c);
/// b(x) = A x.
DriftField make_linear_drift(int d, const Jacobian& A);
DriftField make_linear_drift(int d, double scale);
/// b = (-d psi/dx2, d psi/dx1) with psi = amplitude cos(pi x1/L) cos(pi x2/L).
DriftField make_stream_drift(double half_width, double amplitude = 1.0);
/// b = (amplitude sin(pi x2/L), 0).
DriftField make_shear_drift(double half_width, double amplitude = 1.0);
/// b(x) = sign(x) |x|^alpha in one dimension.
DriftField make_power_drift(double alpha, double half_width = 1.0);
/// g(t) b(t, x) with g(t) = 1 + amplitude sin(omega t).
DriftField make_time_modulated(const DriftField& base, double amplitude, double omega);

/// Quadrature of the convolution of b with the standard mollifier of radius
/// epsilon on a fixed midpoint lattice (epsilon / 24 per node in 1D, coarser
/// in higher dimensions), normalized by the discrete kernel mass.
DriftField make_mollified(const DriftField& base, double epsilon);

}  // namespace pathwise
