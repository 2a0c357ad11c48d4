#include "pathwise/mollifier.hpp"

#include "pathwise/errors.hpp"

#include <cmath>

namespace pathwise {

double MollifierKernel::mass() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double mollifier_profile(double r, double epsilon) {
  const double s = r / epsilon;
  if (s >= 1.0) return 0.0;
  return std::exp(1.0 / (s * s - 1.0));
}

MollifierKernel make_mollifier_kernel(const SpatialGrid& grid, const MollifierSpec& spec) {
  const double h = grid.spacing();
  if (!(spec.epsilon >= h)) {
    throw ConfigurationError("mollifier epsilon " + std::to_string(spec.epsilon) +
                             " is below the grid spacing " + std::to_string(h) +
                             " (under-resolved kernel)");
  }
  const int reach = static_cast<int>(std::ceil(spec.epsilon / h));
  const int d = grid.dimension();
  MollifierKernel k;
  k.epsilon = spec.epsilon;

  std::array<int, kMaxDim> off{};
  for (int a = 0; a < d; ++a) off[a] = -reach;
  while (true) {
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) r2 += (off[a] * h) * (off[a] * h);
    const double w = mollifier_profile(std::sqrt(r2), spec.epsilon);
    if (w > 0.0) {
      k.offsets.push_back(off);
      k.weights.push_back(w);
    }
    int a = d - 1;
    while (a >= 0 && off[a] == reach) {
      off[a] = -reach;
      --a;
    }
    if (a < 0) break;
    ++off[a];
  }
  const double total = k.mass();
  for (double& w : k.weights) w /= total;
  return k;
}

ScalarField mollify(const ScalarField& f, const MollifierSpec& spec) {
  const SpatialGrid& g = f.grid();
  const MollifierKernel k = make_mollifier_kernel(g, spec);
  const int d = g.dimension();
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const auto idx = g.multi_index(flat);
    double acc = 0.0;
    for (std::size_t j = 0; j < k.weights.size(); ++j) {
      std::array<int, kMaxDim> src{};
      for (int a = 0; a < d; ++a) src[a] = g.wrap_index(static_cast<long long>(idx[a]) - k.offsets[j][a]);
      acc += k.weights[j] * f[g.flat_index(src)];
    }
    out[flat] = acc;
  }
  return ScalarField(g, std::move(out));
}

}  // namespace pathwise
