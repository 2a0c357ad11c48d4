#include "pathwise/field.hpp"

#include "pathwise/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pathwise {

namespace {

void require_finite(std::span<const double> v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw InvalidFieldError("non-finite field value at flat index " + std::to_string(i));
    }
  }
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) {
    throw ConfigurationError("fields live on different grids: " + a.grid().describe() + " vs " +
                             b.grid().describe());
  }
}

// Stencil along one axis: base node index (unwrapped), weights, width.
struct AxisStencil {
  long long base = 0;
  std::array<double, 4> w{};
  int width = 1;
};

// Grid units position of x along an axis, snapped onto a node when it lies within
// rounding distance of one so that nodes reproduce exactly.
AxisStencil locate(const SpatialGrid& g, double x, Interpolation order) {
  const double u = (x + g.half_width()) / g.spacing();
  const double r = std::nearbyint(u);
  AxisStencil s;
  if (std::abs(u - r) <= 1e-12 * std::max(1.0, std::abs(u))) {
    s.base = static_cast<long long>(r);
    s.w = {1.0, 0.0, 0.0, 0.0};
    s.width = 1;
    return s;
  }
  const double fl = std::floor(u);
  const double t = u - fl;
  const auto i0 = static_cast<long long>(fl);
  if (order == Interpolation::linear) {
    s.base = i0;
    s.w = {1.0 - t, t, 0.0, 0.0};
    s.width = 2;
  } else {
    s.base = i0 - 1;
    s.w = {-t * (t - 1.0) * (t - 2.0) / 6.0, (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
           -(t + 1.0) * t * (t - 2.0) / 2.0, (t + 1.0) * t * (t - 1.0) / 6.0};
    s.width = 4;
  }
  return s;
}

double gather(const ScalarField& f, const std::array<AxisStencil, kMaxDim>& st, int axis,
              std::size_t prefix, bool clamp) {
  const SpatialGrid& g = f.grid();
  const AxisStencil& s = st[axis];
  const bool last = axis + 1 == g.dimension();
  double acc = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int k = 0; k < s.width; ++k) {
    const std::size_t next =
        prefix * static_cast<std::size_t>(g.points_per_axis()) + g.wrap_index(s.base + k);
    const double v = last ? f[next] : gather(f, st, axis + 1, next, clamp);
    acc += s.w[k] * v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return clamp ? std::clamp(acc, lo, hi) : acc;
}

double interpolate_impl(const ScalarField& f, const Vec& x, Interpolation order, bool clamp) {
  const SpatialGrid& g = f.grid();
  std::array<AxisStencil, kMaxDim> st{};
  for (int a = 0; a < g.dimension(); ++a) st[a] = locate(g, x[a], order);
  return gather(f, st, 0, 0, clamp);
}

// One-axis shift of the whole field: out(i) = in(position i - s) in grid units.
std::vector<double> shift_axis(const SpatialGrid& g, const std::vector<double>& in, int axis,
                               double s, Interpolation order) {
  const int N = g.points_per_axis();
  const double r = std::nearbyint(s);
  const bool lattice = std::abs(s - r) <= 1e-12 * std::max(1.0, std::abs(s));

  std::size_t stride = 1;
  for (int a = g.dimension() - 1; a > axis; --a) stride *= static_cast<std::size_t>(N);
  const std::size_t outer = in.size() / (stride * N);

  AxisStencil st;
  if (lattice) {
    st.base = -static_cast<long long>(r);
    st.w = {1.0, 0.0, 0.0, 0.0};
    st.width = 1;
  } else {
    // Position of node 0 after the shift, in grid units.
    const double u = -s;
    const double fl = std::floor(u);
    const double t = u - fl;
    const auto i0 = static_cast<long long>(fl);
    if (order == Interpolation::linear) {
      st.base = i0;
      st.w = {1.0 - t, t, 0.0, 0.0};
      st.width = 2;
    } else {
      st.base = i0 - 1;
      st.w = {-t * (t - 1.0) * (t - 2.0) / 6.0, (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
              -(t + 1.0) * t * (t - 2.0) / 2.0, (t + 1.0) * t * (t - 1.0) / 6.0};
      st.width = 4;
    }
  }

  std::vector<double> out(in.size(), 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const std::size_t base = o * stride * N + inner;
      for (int i = 0; i < N; ++i) {
        double acc = 0.0;
        for (int k = 0; k < st.width; ++k) {
          const int j = g.wrap_index(i + st.base + k);
          acc += st.w[k] * in[base + static_cast<std::size_t>(j) * stride];
        }
        out[base + static_cast<std::size_t>(i) * stride] = acc;
      }
    }
  }
  return out;
}

}  // namespace

ScalarField::ScalarField(const SpatialGrid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField::ScalarField(const SpatialGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw InvalidFieldError("field has " + std::to_string(values_.size()) + " values, grid " +
                            grid_.describe() + " needs " + std::to_string(grid_.size()));
  }
  require_finite(values_);
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_.cell_volume();
}

ScalarField ScalarField::operator+(const ScalarField& o) const {
  require_same_grid(*this, o);
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] + o.values_[i];
  return ScalarField(grid_, std::move(v));
}

ScalarField ScalarField::operator-(const ScalarField& o) const {
  require_same_grid(*this, o);
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] - o.values_[i];
  return ScalarField(grid_, std::move(v));
}

ScalarField ScalarField::scaled(double c) const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * values_[i];
  return ScalarField(grid_, std::move(v));
}

LebesgueExponent::LebesgueExponent(double p) : p_(p) {
  if (!(p >= 1.0)) throw ConfigurationError("Lebesgue exponent must satisfy p >= 1");
  q_ = std::isinf(p) ? 1.0 : (p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0));
}

namespace {

double lp_sum(std::span<const double> a, std::span<const double> b, double p) {
  double s = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - (b.empty() ? 0.0 : b[i]));
  } else if (p == 2.0) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double v = a[i] - (b.empty() ? 0.0 : b[i]);
      s += v * v;
    }
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) s += std::pow(std::abs(a[i] - (b.empty() ? 0.0 : b[i])), p);
  }
  return s;
}

}  // namespace

double lp_norm(const ScalarField& f, double p) {
  if (!(p >= 1.0) || std::isinf(p)) throw ConfigurationError("lp_norm needs a finite p >= 1");
  require_finite(f.values());
  const double s = lp_sum(f.values(), {}, p) * f.grid().cell_volume();
  return p == 1.0 ? s : std::pow(s, 1.0 / p);
}

double lp_norm(const ScalarField& f, const LebesgueExponent& p) { return lp_norm(f, p.p()); }

double lp_distance(const ScalarField& a, const ScalarField& b, double p) {
  require_same_grid(a, b);
  if (!(p >= 1.0) || std::isinf(p)) throw ConfigurationError("lp_distance needs a finite p >= 1");
  const double s = lp_sum(a.values(), b.values(), p) * a.grid().cell_volume();
  return p == 1.0 ? s : std::pow(s, 1.0 / p);
}

double interpolate(const ScalarField& f, const Vec& x, Interpolation order) {
  return interpolate_impl(f, x, order, false);
}

double interpolate_clamped(const ScalarField& f, const Vec& x) {
  return interpolate_impl(f, x, Interpolation::cubic, true);
}

ScalarField shift_field(const ScalarField& f, const Vec& delta, Interpolation order) {
  const SpatialGrid& g = f.grid();
  std::vector<double> v(f.values().begin(), f.values().end());
  for (int a = 0; a < g.dimension(); ++a) {
    if (delta[a] == 0.0) continue;
    v = shift_axis(g, v, a, delta[a] / g.spacing(), order);
  }
  return ScalarField(g, std::move(v));
}

}  // namespace pathwise
