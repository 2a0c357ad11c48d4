#pragma once

#include "pathwise/field.hpp"

#include <vector>

namespace pathwise {

/// Standard bump mollifier exp(1/((|x|/eps)^2 - 1)) on |x| < eps.
struct MollifierSpec {
  double epsilon = 0.0;
};

/// The bump sampled on lattice offsets and renormalized so that the weights
/// (which already include the cell volume h^d) sum to one.
struct MollifierKernel {
  std::vector<std::array<int, kMaxDim>> offsets;
  std::vector<double> weights;
  double epsilon = 0.0;

  /// Sum of weights; one up to rounding.
  double mass() const;
};

/// Unnormalized bump profile at radius r.
double mollifier_profile(double r, double epsilon);

/// Throws ConfigurationError when epsilon < h (the kernel would be a single node).
MollifierKernel make_mollifier_kernel(const SpatialGrid& grid, const MollifierSpec& spec);

/// Periodic convolution with the discrete kernel.
ScalarField mollify(const ScalarField& f, const MollifierSpec& spec);

}  // namespace pathwise
