#pragma once

#include <array>
#include <cstddef>
#include <string>

namespace pathwise {

/// Spatial points and vectors. Components beyond the grid dimension are zero.
inline constexpr int kMaxDim = 3;
using Vec = std::array<double, kMaxDim>;

/// Uniform periodic grid on the box [-L, L)^d with N nodes per axis.
/// Flat indices are row-major: the first axis varies slowest.
class SpatialGrid {
public:
  SpatialGrid(int dimension, double half_width, int points_per_axis);

  int dimension() const { return d_; }
  double half_width() const { return L_; }
  int points_per_axis() const { return N_; }
  double spacing() const { return h_; }
  std::size_t size() const { return size_; }
  /// h^d, the rectangle-rule weight of one node.
  double cell_volume() const { return cell_volume_; }

  double coordinate(int index) const { return -L_ + index * h_; }
  Vec node(std::size_t flat) const;
  std::array<int, kMaxDim> multi_index(std::size_t flat) const;
  std::size_t flat_index(const std::array<int, kMaxDim>& idx) const;
  /// Nearest node index along one axis for a coordinate, wrapped into [0, N).
  int index_of(double coordinate) const;

  /// Maps a coordinate into [-L, L).
  double wrap(double x) const;
  int wrap_index(long long i) const;

  bool operator==(const SpatialGrid& o) const {
    return d_ == o.d_ && L_ == o.L_ && N_ == o.N_;
  }

  std::string describe() const;

private:
  int d_;
  double L_;
  int N_;
  double h_;
  std::size_t size_;
  double cell_volume_;
};

/// Axis-aligned box, used for hypothesis windows.
struct Box {
  int dimension = 1;
  Vec lo{};
  Vec hi{};

  double volume() const;
  std::string describe() const;
  static Box of_grid(const SpatialGrid& g);
};

}  // namespace pathwise
