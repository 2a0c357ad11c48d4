#include "pathwise/grid.hpp"

#include "pathwise/errors.hpp"

#include <cmath>
#include <sstream>

namespace pathwise {

SpatialGrid::SpatialGrid(int dimension, double half_width, int points_per_axis)
    : d_(dimension), L_(half_width), N_(points_per_axis) {
  if (d_ < 1 || d_ > kMaxDim) {
    throw ConfigurationError("grid dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  }
  if (!(L_ > 0.0) || !std::isfinite(L_)) {
    throw ConfigurationError("grid half width must be positive and finite");
  }
  if (N_ < 8) {
    throw ConfigurationError("grid needs at least 8 points per axis");
  }
  h_ = 2.0 * L_ / N_;
  size_ = 1;
  cell_volume_ = 1.0;
  for (int a = 0; a < d_; ++a) {
    size_ *= static_cast<std::size_t>(N_);
    cell_volume_ *= h_;
  }
}

std::array<int, kMaxDim> SpatialGrid::multi_index(std::size_t flat) const {
  std::array<int, kMaxDim> idx{};
  for (int a = d_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % N_);
    flat /= N_;
  }
  return idx;
}

std::size_t SpatialGrid::flat_index(const std::array<int, kMaxDim>& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < d_; ++a) {
    flat = flat * N_ + static_cast<std::size_t>(idx[a]);
  }
  return flat;
}

Vec SpatialGrid::node(std::size_t flat) const {
  const auto idx = multi_index(flat);
  Vec x{};
  for (int a = 0; a < d_; ++a) x[a] = coordinate(idx[a]);
  return x;
}

int SpatialGrid::wrap_index(long long i) const {
  long long r = i % N_;
  if (r < 0) r += N_;
  return static_cast<int>(r);
}

int SpatialGrid::index_of(double coordinate) const {
  return wrap_index(std::llround((coordinate + L_) / h_));
}

double SpatialGrid::wrap(double x) const {
  const double period = 2.0 * L_;
  double y = std::fmod(x + L_, period);
  if (y < 0.0) y += period;
  if (y >= period) y -= period;
  return y - L_;
}

std::string SpatialGrid::describe() const {
  std::ostringstream os;
  os << "d=" << d_ << " L=" << L_ << " N=" << N_;
  return os.str();
}

double Box::volume() const {
  double v = 1.0;
  for (int a = 0; a < dimension; ++a) v *= hi[a] - lo[a];
  return v;
}

std::string Box::describe() const {
  std::ostringstream os;
  for (int a = 0; a < dimension; ++a) {
    if (a) os << "x";
    os << "[" << lo[a] << "," << hi[a] << "]";
  }
  return os.str();
}

Box Box::of_grid(const SpatialGrid& g) {
  Box b;
  b.dimension = g.dimension();
  for (int a = 0; a < g.dimension(); ++a) {
    b.lo[a] = -g.half_width();
    b.hi[a] = g.half_width();
  }
  return b;
}

}  // namespace pathwise
