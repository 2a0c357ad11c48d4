#pragma once

#include "pathwise/grid.hpp"

#include <span>
#include <vector>

namespace pathwise {

/// Gridded real-valued function on a periodic box. Values are always finite.
class ScalarField {
public:
  explicit ScalarField(const SpatialGrid& grid);  // zeros
  ScalarField(const SpatialGrid& grid, std::vector<double> values);

  const SpatialGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  double min() const;
  double max() const;
  double max_abs() const;
  /// Rectangle-rule integral.
  double integral() const;

  ScalarField operator+(const ScalarField& o) const;
  ScalarField operator-(const ScalarField& o) const;
  ScalarField scaled(double c) const;

  bool operator==(const ScalarField& o) const {
    return grid_ == o.grid_ && values_ == o.values_;
  }

private:
  SpatialGrid grid_;
  std::vector<double> values_;
};

/// Integrability exponent p >= 1 together with its conjugate q.
class LebesgueExponent {
public:
  explicit LebesgueExponent(double p);
  double p() const { return p_; }
  /// Conjugate exponent; +infinity when p == 1.
  double q() const { return q_; }

private:
  double p_;
  double q_;
};

enum class Interpolation { linear, cubic };

double lp_norm(const ScalarField& f, const LebesgueExponent& p);
double lp_norm(const ScalarField& f, double p);
/// lp_norm(a - b) without materializing the difference.
double lp_distance(const ScalarField& a, const ScalarField& b, double p);

/// Periodic tensor-product interpolation. Exact at nodes.
double interpolate(const ScalarField& f, const Vec& x, Interpolation order = Interpolation::cubic);

/// Cubic interpolation with each 1D pass clamped to the range of its four
/// stencil values, so the result never leaves [min f, max f].
double interpolate_clamped(const ScalarField& f, const Vec& x);

/// g(x) = f(x - delta). Lattice deltas rotate indices exactly.
ScalarField shift_field(const ScalarField& f, const Vec& delta,
                        Interpolation order = Interpolation::cubic);

}  // namespace pathwise
