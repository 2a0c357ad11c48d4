#include "pathwise/drift.hpp"

#include "pathwise/errors.hpp"
#include "pathwise/mollifier.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace pathwise {

namespace {

std::string where(const DriftField& b, double t, const Vec& x) {
  std::ostringstream os;
  os.precision(17);
  os << "drift '" << b.id << "' at t=" << t << " x=(";
  for (int a = 0; a < b.dimension; ++a) os << (a ? "," : "") << x[a];
  os << ")";
  return os.str();
}

}  // namespace

Vec eval_drift(const DriftField& b, double t, const Vec& x) {
  const Vec v = b.eval(t, x);
  for (int a = 0; a < b.dimension; ++a) {
    if (!std::isfinite(v[a])) throw DriftEvaluationError("non-finite value of " + where(b, t, x));
  }
  return v;
}

DivergenceValue divergence_of(const DriftField& b, double t, const Vec& x) {
  DivergenceValue out;
  if (b.divergence) {
    out.value = b.divergence(t, x);
  } else {
    const double hb = 1e-4 * b.reference_length;
    double s = 0.0;
    for (int a = 0; a < b.dimension; ++a) {
      Vec xp = x;
      Vec xm = x;
      xp[a] += hb;
      xm[a] -= hb;
      s += (eval_drift(b, t, xp)[a] - eval_drift(b, t, xm)[a]) / (2.0 * hb);
    }
    out.value = s;
    out.approximate = true;
  }
  if (!std::isfinite(out.value)) throw DriftEvaluationError("non-finite divergence of " + where(b, t, x));
  return out;
}

JacobianValue jacobian_of(const DriftField& b, double t, const Vec& x) {
  JacobianValue out;
  if (b.jacobian) {
    out.value = b.jacobian(t, x);
  } else {
    const double hb = 1e-4 * b.reference_length;
    for (int j = 0; j < b.dimension; ++j) {
      Vec xp = x;
      Vec xm = x;
      xp[j] += hb;
      xm[j] -= hb;
      const Vec fp = eval_drift(b, t, xp);
      const Vec fm = eval_drift(b, t, xm);
      for (int i = 0; i < b.dimension; ++i) out.value[i][j] = (fp[i] - fm[i]) / (2.0 * hb);
    }
    out.approximate = true;
  }
  for (int i = 0; i < b.dimension; ++i) {
    for (int j = 0; j < b.dimension; ++j) {
      if (!std::isfinite(out.value[i][j])) throw DriftEvaluationError("non-finite Jacobian of " + where(b, t, x));
    }
  }
  return out;
}

DriftField make_constant_drift(int d, const Vec& c) {
  DriftField b;
  b.id = "constant";
  b.dimension = d;
  Vec cc{};
  for (int a = 0; a < d; ++a) cc[a] = c[a];
  b.eval = [cc](double, const Vec&) { return cc; };
  b.divergence = [](double, const Vec&) { return 0.0; };
  b.jacobian = [](double, const Vec&) { return Jacobian{}; };
  b.tags = {"smooth", "lipschitz", "divergence_free"};
  return b;
}

DriftField make_linear_drift(int d, const Jacobian& A) {
  DriftField b;
  b.id = "linear";
  b.dimension = d;
  b.eval = [d, A](double, const Vec& x) {
    Vec v{};
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) v[i] += A[i][j] * x[j];
    }
    return v;
  };
  double trace = 0.0;
  for (int i = 0; i < d; ++i) trace += A[i][i];
  b.divergence = [trace](double, const Vec&) { return trace; };
  b.jacobian = [A](double, const Vec&) { return A; };
  b.tags = {"smooth", "lipschitz"};
  if (trace == 0.0) b.tags.insert("divergence_free");
  return b;
}

DriftField make_linear_drift(int d, double scale) {
  Jacobian A{};
  for (int i = 0; i < d; ++i) A[i][i] = scale;
  return make_linear_drift(d, A);
}

DriftField make_stream_drift(double half_width, double amplitude) {
  const double k = std::numbers::pi / half_width;
  DriftField b;
  b.id = "stream";
  b.dimension = 2;
  b.reference_length = half_width;
  b.eval = [k, amplitude](double, const Vec& x) {
    const double s1 = std::sin(k * x[0]), c1 = std::cos(k * x[0]);
    const double s2 = std::sin(k * x[1]), c2 = std::cos(k * x[1]);
    return Vec{amplitude * k * c1 * s2, -amplitude * k * s1 * c2, 0.0};
  };
  b.jacobian = [k, amplitude](double, const Vec& x) {
    const double s1 = std::sin(k * x[0]), c1 = std::cos(k * x[0]);
    const double s2 = std::sin(k * x[1]), c2 = std::cos(k * x[1]);
    const double kk = amplitude * k * k;
    Jacobian J{};
    J[0][0] = -kk * s1 * s2;
    J[0][1] = kk * c1 * c2;
    J[1][0] = -kk * c1 * c2;
    J[1][1] = kk * s1 * s2;
    return J;
  };
  b.divergence = [k, amplitude](double, const Vec& x) {
    const double ss = amplitude * k * k * std::sin(k * x[0]) * std::sin(k * x[1]);
    return -ss + ss;
  };
  b.tags = {"smooth", "lipschitz", "divergence_free"};
  return b;
}

DriftField make_shear_drift(double half_width, double amplitude) {
  const double k = std::numbers::pi / half_width;
  DriftField b;
  b.id = "shear";
  b.dimension = 2;
  b.reference_length = half_width;
  b.eval = [k, amplitude](double, const Vec& x) { return Vec{amplitude * std::sin(k * x[1]), 0.0, 0.0}; };
  b.jacobian = [k, amplitude](double, const Vec& x) {
    Jacobian J{};
    J[0][1] = amplitude * k * std::cos(k * x[1]);
    return J;
  };
  b.divergence = [](double, const Vec&) { return 0.0; };
  b.tags = {"smooth", "lipschitz", "divergence_free"};
  return b;
}

DriftField make_power_drift(double alpha, double half_width) {
  if (!(alpha > 0.0)) throw ConfigurationError("power drift needs alpha > 0");
  DriftField b;
  b.id = "power1d";
  b.dimension = 1;
  b.reference_length = half_width;
  b.eval = [alpha](double, const Vec& x) {
    const double r = std::abs(x[0]);
    return Vec{std::copysign(std::pow(r, alpha), x[0]) * (r > 0.0 ? 1.0 : 0.0), 0.0, 0.0};
  };
  const auto derivative = [alpha](const Vec& x) { return alpha * std::pow(std::abs(x[0]), alpha - 1.0); };
  b.divergence = [derivative](double, const Vec& x) { return derivative(x); };
  b.jacobian = [derivative](double, const Vec& x) {
    Jacobian J{};
    J[0][0] = derivative(x);
    return J;
  };
  if (alpha >= 1.0) {
    b.tags = {"lipschitz"};
    if (alpha == 1.0 || alpha >= 2.0) b.tags.insert("smooth");
  } else {
    b.tags = {"sobolev_w1q"};
    b.singular_points.push_back(Vec{});
  }
  return b;
}

DriftField make_time_modulated(const DriftField& base, double amplitude, double omega) {
  DriftField b = base;
  b.id = base.id + "_modulated";
  const auto g = [amplitude, omega](double t) { return 1.0 + amplitude * std::sin(omega * t); };
  b.eval = [g, f = base.eval](double t, const Vec& x) {
    Vec v = f(t, x);
    const double s = g(t);
    for (double& c : v) c *= s;
    return v;
  };
  if (base.divergence) {
    b.divergence = [g, f = base.divergence](double t, const Vec& x) { return g(t) * f(t, x); };
  }
  if (base.jacobian) {
    b.jacobian = [g, f = base.jacobian](double t, const Vec& x) {
      Jacobian J = f(t, x);
      const double s = g(t);
      for (auto& row : J) {
        for (double& c : row) c *= s;
      }
      return J;
    };
  }
  b.tags.insert("time_modulated");
  return b;
}

DriftField make_mollified(const DriftField& base, double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigurationError("mollifier epsilon must be positive");
  const int d = base.dimension;
  // Nodes per kernel radius and axis; 1D fields are the rough ones in the catalog.
  const int per_radius = d == 1 ? 24 : (d == 2 ? 8 : 4);
  const double spacing = epsilon / per_radius;

  DriftField b;
  b.id = base.id + "_mollified";
  b.dimension = d;
  b.reference_length = base.reference_length;
  // The quadrature nodes y_j = (j + 1/2) * spacing are fixed in space and only
  // the kernel weights depend on x, so the result is smooth in x even when the
  // base field has kinks. The half-cell offset keeps nodes off the origin.
  b.eval = [d, epsilon, spacing, f = base.eval](double t, const Vec& x) {
    std::array<long, kMaxDim> lo{};
    std::array<long, kMaxDim> hi{};
    for (int a = 0; a < d; ++a) {
      lo[a] = static_cast<long>(std::ceil((x[a] - epsilon) / spacing - 0.5));
      hi[a] = static_cast<long>(std::floor((x[a] + epsilon) / spacing - 0.5));
    }
    Vec acc{};
    double mass = 0.0;
    std::array<long, kMaxDim> j = lo;
    while (true) {
      Vec y{};
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) {
        y[a] = (static_cast<double>(j[a]) + 0.5) * spacing;
        r2 += (x[a] - y[a]) * (x[a] - y[a]);
      }
      const double w = mollifier_profile(std::sqrt(r2), epsilon);
      if (w > 0.0) {
        const Vec v = f(t, y);
        for (int a = 0; a < d; ++a) acc[a] += w * v[a];
        mass += w;
      }
      int a = d - 1;
      while (a >= 0 && j[a] == hi[a]) {
        j[a] = lo[a];
        --a;
      }
      if (a < 0) break;
      ++j[a];
    }
    for (int a = 0; a < d; ++a) acc[a] /= mass;
    return acc;
  };
  b.tags = base.tags;
  b.tags.insert("mollified");
  return b;
}

}  // namespace pathwise
