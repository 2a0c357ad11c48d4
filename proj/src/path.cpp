#include "pathwise/path.hpp"

#include "pathwise/csv.hpp"
#include "pathwise/errors.hpp"
#include "pathwise/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pathwise {

std::string to_string(PathKind k) {
  switch (k) {
    case PathKind::brownian: return "brownian";
    case PathKind::piecewise_linear_bv: return "piecewise_linear_bv";
    case PathKind::zero: return "zero";
  }
  return "unknown";
}

SamplePath::SamplePath(int dimension, std::vector<double> times, std::vector<Vec> values, PathKind kind,
                       std::optional<std::uint64_t> seed)
    : d_(dimension), times_(std::move(times)), values_(std::move(values)), kind_(kind), seed_(seed) {
  if (d_ < 1 || d_ > kMaxDim) throw ConfigurationError("path dimension out of range");
  if (times_.size() < 2) throw ConfigurationError("path needs at least one interval");
  if (times_.size() != values_.size()) throw ConfigurationError("path times and values differ in length");
  if (times_.front() != 0.0) throw ConfigurationError("path must start at t = 0");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k] > times_[k - 1])) throw ConfigurationError("path times must be strictly increasing");
  }
  for (const Vec& v : values_) {
    for (int a = 0; a < d_; ++a) {
      if (!std::isfinite(v[a])) throw InvalidFieldError("non-finite path value");
    }
  }
  for (int a = 0; a < d_; ++a) {
    if (values_.front()[a] != 0.0) throw ConfigurationError("path must start at W(0) = 0");
  }
  if (kind_ == PathKind::zero) {
    for (const Vec& v : values_) {
      for (int a = 0; a < d_; ++a) {
        if (v[a] != 0.0) throw ConfigurationError("zero path carries a non-zero value");
      }
    }
  }
  level_ = steps();
}

std::string SamplePath::label() const {
  std::string s = to_string(kind_);
  if (seed_) s += "_s" + std::to_string(*seed_);
  s += "_n" + std::to_string(level_);
  return s;
}

std::vector<double> uniform_mesh(double T, int K) {
  if (K < 1) throw ConfigurationError("path mesh needs K >= 1");
  if (!(T > 0.0)) throw ConfigurationError("path horizon must be positive");
  std::vector<double> t(K + 1);
  for (int k = 0; k <= K; ++k) t[k] = T * k / K;
  t[K] = T;
  return t;
}

SamplePath zero_path(int d, double T, int K) {
  return SamplePath(d, uniform_mesh(T, K), std::vector<Vec>(K + 1, Vec{}), PathKind::zero);
}

SamplePath sample_brownian(std::uint64_t seed, double T, int K, int d) {
  std::vector<double> times = uniform_mesh(T, K);
  std::vector<Vec> values(K + 1, Vec{});
  for (int a = 0; a < d; ++a) {
    double w = 0.0;
    for (int k = 0; k < K; ++k) {
      const double dt = times[k + 1] - times[k];
      w += std::sqrt(dt) * keyed_normal(seed, static_cast<std::uint32_t>(a), static_cast<std::uint64_t>(k));
      values[k + 1][a] = w;
    }
  }
  return SamplePath(d, std::move(times), std::move(values), PathKind::brownian, seed);
}

SamplePath piecewise_linear_approx(const SamplePath& path, int n) {
  const int K = path.steps();
  if (n < 1 || K % n != 0) {
    throw ConfigurationError("approximation level " + std::to_string(n) + " does not divide the path mesh K=" +
                             std::to_string(K));
  }
  const int m = K / n;
  const auto& t = path.times();
  const auto& w = path.values();
  std::vector<Vec> values(K + 1, Vec{});
  for (int c = 0; c < n; ++c) {
    const int k0 = c * m;
    const int k1 = k0 + m;
    values[k0] = w[k0];
    for (int k = k0 + 1; k < k1; ++k) {
      const double lambda = (t[k] - t[k0]) / (t[k1] - t[k0]);
      for (int a = 0; a < path.dimension(); ++a) values[k][a] = w[k0][a] + lambda * (w[k1][a] - w[k0][a]);
    }
  }
  values[K] = w[K];
  const PathKind kind = path.kind() == PathKind::zero ? PathKind::zero : PathKind::piecewise_linear_bv;
  SamplePath out(path.dimension(), t, std::move(values), kind, path.seed());
  out.set_level(n);
  return out;
}

SamplePath restrict_to_knots(const SamplePath& path, int n) {
  const int K = path.steps();
  if (n < 1 || K % n != 0) {
    throw ConfigurationError("restriction level " + std::to_string(n) + " does not divide the path mesh K=" +
                             std::to_string(K));
  }
  const int m = K / n;
  std::vector<double> times;
  std::vector<Vec> values;
  for (int k = 0; k <= K; k += m) {
    times.push_back(path.times()[k]);
    values.push_back(path.values()[k]);
  }
  return SamplePath(path.dimension(), std::move(times), std::move(values), path.kind(), path.seed());
}

Vec eval_path(const SamplePath& path, double t) {
  const auto& times = path.times();
  if (!(t >= 0.0) || t > times.back()) {
    throw RangeError("path evaluated at t=" + std::to_string(t) + " outside [0, " + std::to_string(times.back()) + "]");
  }
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.end()) return path.values().back();
  const auto k1 = static_cast<std::size_t>(it - times.begin());
  const std::size_t k0 = k1 - 1;
  if (t == times[k0]) return path.values()[k0];
  const double lambda = (t - times[k0]) / (times[k1] - times[k0]);
  const Vec& a = path.values()[k0];
  const Vec& b = path.values()[k1];
  Vec out{};
  for (int c = 0; c < path.dimension(); ++c) out[c] = a[c] + lambda * (b[c] - a[c]);
  return out;
}

double sup_distance(const SamplePath& a, const SamplePath& b) {
  if (a.horizon() != b.horizon()) throw ConfigurationError("paths have different horizons");
  if (a.dimension() != b.dimension()) throw ConfigurationError("paths have different dimensions");
  std::vector<double> mesh;
  std::merge(a.times().begin(), a.times().end(), b.times().begin(), b.times().end(), std::back_inserter(mesh));
  mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());
  double m = 0.0;
  for (double t : mesh) {
    const Vec va = eval_path(a, t);
    const Vec vb = eval_path(b, t);
    for (int c = 0; c < a.dimension(); ++c) m = std::max(m, std::abs(va[c] - vb[c]));
  }
  return m;
}

Vec total_variation(const SamplePath& path) {
  Vec tv{};
  const auto& w = path.values();
  for (std::size_t k = 1; k < w.size(); ++k) {
    for (int a = 0; a < path.dimension(); ++a) tv[a] += std::abs(w[k][a] - w[k - 1][a]);
  }
  return tv;
}

double sup_norm(const SamplePath& path) {
  double m = 0.0;
  for (const Vec& v : path.values()) {
    for (int a = 0; a < path.dimension(); ++a) m = std::max(m, std::abs(v[a]));
  }
  return m;
}

std::string path_to_csv(const SamplePath& path) {
  std::string out = "k,t";
  for (int a = 0; a < path.dimension(); ++a) out += ",W" + std::to_string(a + 1);
  out += "\n";
  for (std::size_t k = 0; k < path.times().size(); ++k) {
    out += std::to_string(k) + "," + csv::number(path.times()[k]);
    for (int a = 0; a < path.dimension(); ++a) out += "," + csv::number(path.values()[k][a]);
    out += "\n";
  }
  return out;
}

SamplePath path_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw ConfigurationError("empty path file");
  const auto header = csv::split(line);
  if (header.size() < 3 || header[0] != "k" || header[1] != "t") {
    throw ConfigurationError("path file header must be k,t,W1[,W2]");
  }
  const int d = static_cast<int>(header.size()) - 2;
  std::vector<double> times;
  std::vector<Vec> values;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cols = csv::split(line);
    if (cols.size() != header.size()) throw ConfigurationError("path file row has the wrong column count");
    if (csv::parse_int(cols[0]) != static_cast<long long>(times.size())) {
      throw ConfigurationError("path file rows must be numbered 0, 1, 2, ...");
    }
    times.push_back(csv::parse_double(cols[1]));
    Vec v{};
    for (int a = 0; a < d; ++a) v[a] = csv::parse_double(cols[2 + a]);
    values.push_back(v);
  }
  bool all_zero = true;
  for (const Vec& v : values) {
    for (int a = 0; a < d; ++a) all_zero = all_zero && v[a] == 0.0;
  }
  return SamplePath(d, std::move(times), std::move(values), all_zero ? PathKind::zero : PathKind::brownian);
}

}  // namespace pathwise
