#include "pathwise/drift.hpp"
#include "pathwise/errors.hpp"
#include "pathwise/hypotheses.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace pathwise;

namespace {

Box interval(double lo, double hi) {
  Box b;
  b.dimension = 1;
  b.lo[0] = lo;
  b.hi[0] = hi;
  return b;
}

Box square(double L) {
  Box b;
  b.dimension = 2;
  b.lo = {-L, -L, 0.0};
  b.hi = {L, L, 0.0};
  return b;
}

}  // namespace

TEST(EvalDrift, Constant) {
  const auto b = make_constant_drift(2, Vec{2.0, 0.0, 0.0});
  for (double t : {0.0, 0.3, 1.0}) {
    const Vec v = eval_drift(b, t, Vec{-0.7, 5.0, 0.0});
    EXPECT_EQ(v[0], 2.0);
    EXPECT_EQ(v[1], 0.0);
  }
}

TEST(EvalDrift, Linear) {
  const auto b = make_linear_drift(1, -1.0);
  EXPECT_DOUBLE_EQ(eval_drift(b, 0.0, Vec{1.5})[0], -1.5);
}

TEST(EvalDrift, ShearAtQuarterPeriod) {
  const double L = 3.0;
  const auto b = make_shear_drift(L);
  const Vec v = eval_drift(b, 0.0, Vec{0.4, L / 2.0, 0.0});
  EXPECT_NEAR(v[0], 1.0, 1e-15);
  EXPECT_EQ(v[1], 0.0);
}

TEST(EvalDrift, NonFiniteOutputCarriesLocation) {
  DriftField b = make_constant_drift(1, Vec{1.0});
  b.eval = [](double, const Vec&) { return Vec{std::numeric_limits<double>::infinity(), 0.0, 0.0}; };
  try {
    eval_drift(b, 0.25, Vec{0.5});
    FAIL() << "expected DriftEvaluationError";
  } catch (const DriftEvaluationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("0.25"), std::string::npos) << msg;
    EXPECT_NE(msg.find("0.5"), std::string::npos) << msg;
  }
}

TEST(Divergence, ConstantIsZero) {
  const auto b = make_constant_drift(2, Vec{1.0, -3.0, 0.0});
  const auto dv = divergence_of(b, 0.0, Vec{0.1, 0.2, 0.0});
  EXPECT_EQ(dv.value, 0.0);
  EXPECT_FALSE(dv.approximate);
}

TEST(Divergence, LinearIsMinusOne) {
  const auto dv = divergence_of(make_linear_drift(1, -1.0), 0.0, Vec{0.37});
  EXPECT_DOUBLE_EQ(dv.value, -1.0);
  EXPECT_FALSE(dv.approximate);
}

TEST(Divergence, StreamFieldAnalyticAndFallback) {
  const double L = 2.0;
  const auto b = make_stream_drift(L);
  DriftField stripped = b;
  stripped.divergence = nullptr;
  stripped.jacobian = nullptr;
  for (unsigned seed = 0; seed < 40; ++seed) {
    const auto r = oracle::random_values(2, seed, -L, L);
    const Vec x{r[0], r[1], 0.0};
    const auto exact = divergence_of(b, 0.5, x);
    EXPECT_FALSE(exact.approximate);
    EXPECT_LE(std::abs(exact.value), 1e-8);
    const auto fd = divergence_of(stripped, 0.5, x);
    EXPECT_TRUE(fd.approximate);
    EXPECT_LE(std::abs(fd.value), 1e-5);
  }
}

TEST(Divergence, StreamFieldMatchesStreamFunctionDerivatives) {
  // Oracle: b = (-d psi/dx2, d psi/dx1) differentiated by hand.
  const double L = 2.0;
  const double k = std::numbers::pi / L;
  const auto b = make_stream_drift(L, 1.5);
  for (unsigned seed = 0; seed < 20; ++seed) {
    const auto r = oracle::random_values(2, seed + 50, -L, L);
    const Vec v = eval_drift(b, 0.0, Vec{r[0], r[1], 0.0});
    EXPECT_NEAR(v[0], 1.5 * k * std::cos(k * r[0]) * std::sin(k * r[1]), 1e-14);
    EXPECT_NEAR(v[1], -1.5 * k * std::sin(k * r[0]) * std::cos(k * r[1]), 1e-14);
  }
}

TEST(Jacobian, FallbackAgreesWithAnalytic) {
  const std::vector<DriftField> fields = {make_stream_drift(2.0), make_shear_drift(2.0),
                                          make_time_modulated(make_stream_drift(2.0), 0.5, 3.0)};
  for (const auto& b : fields) {
    DriftField stripped = b;
    stripped.jacobian = nullptr;
    for (unsigned seed = 0; seed < 10; ++seed) {
      const auto r = oracle::random_values(3, seed + 7, -2.0, 2.0);
      const double t = 0.5 * (r[2] + 2.0);
      const Vec x{r[0], r[1], 0.0};
      const auto exact = jacobian_of(b, t, x);
      const auto fd = jacobian_of(stripped, t, x);
      EXPECT_TRUE(fd.approximate);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) EXPECT_NEAR(fd.value[i][j], exact.value[i][j], 1e-6) << b.id;
      }
    }
  }
}

TEST(PowerDrift, ValuesAndSingularPoint) {
  const auto b = make_power_drift(0.75);
  EXPECT_NEAR(eval_drift(b, 0.0, Vec{0.0625})[0], 0.125, 1e-15);
  EXPECT_NEAR(eval_drift(b, 0.0, Vec{-0.0625})[0], -0.125, 1e-15);
  EXPECT_EQ(eval_drift(b, 0.0, Vec{0.0})[0], 0.0);
  ASSERT_EQ(b.singular_points.size(), 1u);
  EXPECT_TRUE(make_power_drift(1.5).singular_points.empty());
}

TEST(TimeModulated, ScalesByProfile) {
  const auto base = make_linear_drift(1, 2.0);
  const auto b = make_time_modulated(base, 0.5, 4.0);
  for (double t : {0.0, 0.2, 0.9}) {
    const double g = 1.0 + 0.5 * std::sin(4.0 * t);
    EXPECT_NEAR(eval_drift(b, t, Vec{0.3})[0], g * 0.6, 1e-15);
    EXPECT_NEAR(divergence_of(b, t, Vec{0.3}).value, g * 2.0, 1e-15);
  }
  EXPECT_TRUE(b.has_tag("time_modulated"));
}

TEST(Mollified, LinearDriftIsReproduced) {
  // The kernel is even, so affine fields are reproduced up to the lattice sum error.
  const auto b = make_mollified(make_linear_drift(1, -0.5), 0.3);
  for (double x : {-1.0, 0.0, 0.77, 0.0123}) EXPECT_NEAR(eval_drift(b, 0.0, Vec{x})[0], -0.5 * x, 1e-6 * 0.3);
}

TEST(Mollified, PowerDriftIsSmoothedNearOrigin) {
  const double eps = 0.1;
  const auto b = make_mollified(make_power_drift(0.25), eps);
  // Oracle: one-dimensional convolution with the normalized profile by fine midpoint quadrature.
  const auto profile = [](double s) { return std::abs(s) >= 1.0 ? 0.0 : std::exp(1.0 / (s * s - 1.0)); };
  const double mass = oracle::midpoint(profile, -1.0, 1.0, 200000);
  for (double x : {0.0, 0.03, 0.2}) {
    const double ref =
        oracle::midpoint(
            [&](double s) {
              const double y = x - eps * s;
              return profile(s) * (y >= 0 ? 1.0 : -1.0) * std::pow(std::abs(y), 0.25);
            },
            -1.0, 1.0, 200000) /
        mass;
    EXPECT_NEAR(eval_drift(b, 0.0, Vec{x})[0], ref, 2e-3) << "x=" << x;
  }
  // Derivative at the origin is finite after smoothing.
  EXPECT_TRUE(std::isfinite(divergence_of(b, 0.0, Vec{0.0}).value));
}

TEST(Hypotheses, RadicalInverse) {
  EXPECT_DOUBLE_EQ(radical_inverse(1, 2), 0.5);
  EXPECT_DOUBLE_EQ(radical_inverse(6, 2), 0.375);
  EXPECT_DOUBLE_EQ(radical_inverse(5, 3), 7.0 / 9.0);
}

TEST(Hypotheses, ConstantDriftPassesEverything) {
  const auto r = check_hypotheses(make_constant_drift(2, Vec{1.0, 2.0, 0.0}), 2.0, square(1.0), 1.0, 1000);
  EXPECT_TRUE(r.div_bound.ok);
  EXPECT_TRUE(r.lq_loc.ok);
  EXPECT_TRUE(r.w1q_loc.ok);
  EXPECT_TRUE(r.growth.ok);
  EXPECT_TRUE(r.uniqueness_hypotheses_ok());
  EXPECT_EQ(r.div_bound.value, 0.0);
  // |b|^2 = 5 over a window of area 4, T = 1.
  EXPECT_NEAR(r.lq_loc.value, 20.0, 1e-12);
  EXPECT_EQ(r.w1q_loc.value, 0.0);
}

TEST(Hypotheses, RoughPowerDriftFailsSobolevCheck) {
  // |d/dx |x|^0.25|^2 = |x|^-1.5 / 16 is not integrable at 0. With the closest
  // sample at distance ~1/n the truncated integral scales like n^(1.5 - 1), so
  // doubling the sample count multiplies the evidence by about sqrt(2).
  for (int n : {1000, 4000, 32000}) {
    const auto r = check_hypotheses(make_power_drift(0.25), 2.0, interval(-1.0, 1.0), 1.0, n);
    EXPECT_FALSE(r.w1q_loc.ok) << n;
    EXPECT_NEAR(r.w1q_loc.doubled / r.w1q_loc.value, std::sqrt(2.0), 0.03) << n;
    EXPECT_FALSE(r.uniqueness_hypotheses_ok());
  }
}

TEST(Hypotheses, MildPowerDriftPassesSobolevCheck) {
  // Oracle: int_{-1}^{1} (0.75 |x|^-0.25)^2 dx = 0.5625 * 4 over T = 1.
  const auto r = check_hypotheses(make_power_drift(0.75), 2.0, interval(-1.0, 1.0), 1.0, 1000);
  EXPECT_TRUE(r.w1q_loc.ok);
  EXPECT_NEAR(r.w1q_loc.value, 2.25, 0.05 * 2.25);
  EXPECT_TRUE(r.lq_loc.ok);
  // Oracle: int_{-1}^{1} |x|^1.5 dx = 0.8.
  EXPECT_NEAR(r.lq_loc.value, 0.8, 0.01);
  EXPECT_TRUE(r.growth.ok);
}

TEST(Hypotheses, DivergenceFreeFieldsReportTinyConstant) {
  for (const auto& b : {make_stream_drift(2.0), make_shear_drift(2.0), make_time_modulated(make_stream_drift(2.0), 0.3, 2.0)}) {
    const auto r = check_hypotheses(b, 2.0, square(2.0), 1.0, 1000);
    EXPECT_LE(r.div_bound.value, 1e-8) << b.id;
    EXPECT_TRUE(r.uniqueness_hypotheses_ok()) << b.id;
  }
}

TEST(Hypotheses, LinearDriftConstantMatchesClosedForm) {
  const auto r = check_hypotheses(make_linear_drift(2, -0.5), 2.0, square(1.0), 2.0, 1000);
  EXPECT_NEAR(r.div_bound.value, 2.0, 1e-12);
  // Oracle: int_0^2 int_{[-1,1]^2} 0.25 |x|^2 dx dt = 2 * 0.25 * 8/3.
  EXPECT_NEAR(r.lq_loc.value, 4.0 / 3.0, 0.01);
}

TEST(Hypotheses, CatalogEvidenceIsStableAndDeterministic) {
  const std::vector<std::pair<DriftField, Box>> cases = {
      {make_constant_drift(1, Vec{0.5}), interval(-1, 1)},
      {make_linear_drift(1, -1.0), interval(-2, 2)},
      {make_stream_drift(2.0), square(2.0)},
      {make_shear_drift(2.0), square(2.0)},
      {make_time_modulated(make_linear_drift(1, 1.0), 0.5, 3.0), interval(-1, 1)},
  };
  for (const auto& [b, w] : cases) {
    const auto r1 = check_hypotheses(b, 2.0, w, 1.0, 1000);
    const auto r2 = check_hypotheses(b, 2.0, w, 1.0, 1000);
    EXPECT_EQ(r1.to_csv(), r2.to_csv()) << b.id;
    for (const Evidence* e : {&r1.div_bound, &r1.lq_loc, &r1.w1q_loc, &r1.growth}) {
      EXPECT_TRUE(e->ok) << b.id;
      EXPECT_LT(e->relative_change(), kStabilityTolerance) << b.id;
      EXPECT_TRUE(std::isfinite(e->value));
    }
  }
}

TEST(Hypotheses, InfiniteExponentUsesSupNorms) {
  const auto r = check_hypotheses(make_linear_drift(1, 3.0), std::numeric_limits<double>::infinity(),
                                  interval(-1, 1), 1.0, 1000);
  EXPECT_TRUE(std::isinf(r.q_used));
  EXPECT_NEAR(r.w1q_loc.value, 3.0, 1e-12);
  EXPECT_NEAR(r.lq_loc.value, 3.0, 0.01);
}

TEST(Hypotheses, RejectsTooFewSamples) {
  EXPECT_THROW(check_hypotheses(make_constant_drift(1, Vec{1.0}), 2.0, interval(-1, 1), 1.0, 999),
               ConfigurationError);
  EXPECT_THROW(check_hypotheses(make_constant_drift(1, Vec{1.0}), 0.5, interval(-1, 1), 1.0, 1000),
               ConfigurationError);
}

TEST(Hypotheses, CsvRows) {
  const auto r = check_hypotheses(make_constant_drift(1, Vec{1.0}), 2.0, interval(-1, 1), 1.0, 1000);
  const std::string csv = r.to_csv();
  EXPECT_EQ(csv.rfind("check,ok,evidence,threshold\n", 0), 0u);
  for (const char* name : {"div_bound,", "lq_loc,", "w1q_loc,", "growth,"}) {
    EXPECT_NE(csv.find(std::string("\n") + name), std::string::npos) << name;
  }
}
