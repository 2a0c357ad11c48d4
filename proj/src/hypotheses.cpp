#include "pathwise/hypotheses.hpp"

#include "pathwise/csv.hpp"
#include "pathwise/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pathwise {

double radical_inverse(unsigned long long i, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

double Evidence::relative_change() const {
  const double scale = std::max(std::abs(value), std::abs(doubled));
  if (scale == 0.0) return 0.0;
  return std::abs(doubled - value) / scale;
}

namespace {

constexpr unsigned kBases[kMaxDim - 1] = {2, 3};
// Cranley-Patterson rotation by fixed irrationals keeps points off the
// rationals (in particular off the window midpoint).
const double kShifts[kMaxDim] = {0.6180339887498949, 0.4142135623730950, 0.7320508075688772};

struct SliceStats {
  double sup_div = 0.0;
  double lq = 0.0;
  double w1q = 0.0;
  double growth = 0.0;
};

struct Totals {
  double div = 0.0;
  double lq = 0.0;
  double w1q = 0.0;
  double growth = 0.0;
  bool approximate = false;
};

Totals integrate(const DriftField& b, double q, const Box& window, double T, int samples) {
  const int d = b.dimension;
  const double vol = window.volume();
  const bool q_inf = std::isinf(q);
  const double jitter = 1e-9 * b.reference_length;

  std::vector<Vec> points(samples);
  for (int i = 0; i < samples; ++i) {
    Vec x{};
    for (int a = 0; a < d; ++a) {
      // Shifted Hammersley set: stratified first axis, radical inverses after.
      double u = a == 0 ? (i + kShifts[0]) / samples
                        : radical_inverse(static_cast<unsigned long long>(i) + 1, kBases[a - 1]) + kShifts[a];
      u -= std::floor(u);
      x[a] = window.lo[a] + (window.hi[a] - window.lo[a]) * u;
    }
    for (const Vec& s : b.singular_points) {
      double dist2 = 0.0;
      for (int a = 0; a < d; ++a) dist2 += (x[a] - s[a]) * (x[a] - s[a]);
      if (std::sqrt(dist2) < jitter) x[0] = s[0] + jitter;
    }
    points[i] = x;
  }

  Totals tot;
  std::vector<SliceStats> slices(kHypothesisTimeSlices);
  for (int j = 0; j < kHypothesisTimeSlices; ++j) {
    const double t = T * j / (kHypothesisTimeSlices - 1);
    SliceStats st;
    double lq_sum = 0.0;
    double w1q_sum = 0.0;
    for (const Vec& x : points) {
      const Vec v = eval_drift(b, t, x);
      const auto dv = divergence_of(b, t, x);
      const auto jv = jacobian_of(b, t, x);
      tot.approximate = tot.approximate || dv.approximate || jv.approximate;
      double bn2 = 0.0;
      double xn2 = 0.0;
      double jn2 = 0.0;
      for (int a = 0; a < d; ++a) {
        bn2 += v[a] * v[a];
        xn2 += x[a] * x[a];
        for (int c = 0; c < d; ++c) jn2 += jv.value[a][c] * jv.value[a][c];
      }
      const double bn = std::sqrt(bn2);
      const double jn = std::sqrt(jn2);
      st.sup_div = std::max(st.sup_div, std::abs(dv.value));
      st.growth = std::max(st.growth, bn / (1.0 + std::sqrt(xn2)));
      if (q_inf) {
        lq_sum = std::max(lq_sum, bn);
        w1q_sum = std::max(w1q_sum, jn);
      } else {
        lq_sum += std::pow(bn, q);
        w1q_sum += std::pow(jn, q);
      }
    }
    st.lq = q_inf ? lq_sum : vol * lq_sum / samples;
    st.w1q = q_inf ? w1q_sum : vol * w1q_sum / samples;
    slices[j] = st;
  }

  const double dt = T / (kHypothesisTimeSlices - 1);
  for (int j = 0; j < kHypothesisTimeSlices; ++j) {
    const double w = (j == 0 || j == kHypothesisTimeSlices - 1) ? 0.5 * dt : dt;
    tot.div += w * slices[j].sup_div;
    tot.lq += w * slices[j].lq;
    tot.w1q += w * slices[j].w1q;
    tot.growth = std::max(tot.growth, slices[j].growth);
  }
  return tot;
}

Evidence verdict(double value, double doubled) {
  Evidence e;
  e.value = value;
  e.doubled = doubled;
  e.ok = std::isfinite(value) && std::isfinite(doubled) && value < kFinitenessThreshold &&
         doubled < kFinitenessThreshold && e.relative_change() <= kStabilityTolerance;
  return e;
}

}  // namespace

HypothesisReport check_hypotheses(const DriftField& b, double q, const Box& window, double T, int samples) {
  if (!(q >= 1.0)) throw ConfigurationError("hypothesis check needs q >= 1");
  if (samples < 1000) throw ConfigurationError("hypothesis check needs at least 1000 samples");
  if (!(T > 0.0)) throw ConfigurationError("hypothesis check needs T > 0");
  if (window.dimension != b.dimension) throw ConfigurationError("window dimension does not match drift");

  const Totals base = integrate(b, q, window, T, samples);
  const Totals twice = integrate(b, q, window, T, 2 * samples);

  HypothesisReport r;
  r.div_bound = verdict(base.div, twice.div);
  r.lq_loc = verdict(base.lq, twice.lq);
  r.w1q_loc = verdict(base.w1q, twice.w1q);
  r.growth = verdict(base.growth, twice.growth);
  r.q_used = q;
  r.window = window;
  r.T = T;
  r.samples = samples;
  r.used_approximate_derivatives = base.approximate || twice.approximate;
  return r;
}

std::string HypothesisReport::to_csv() const {
  std::string out = "check,ok,evidence,threshold\n";
  const auto row = [&out](const char* name, const Evidence& e) {
    out += std::string(name) + "," + (e.ok ? "true" : "false") + "," + csv::number(e.value) + "," +
           csv::number(kFinitenessThreshold) + "\n";
  };
  row("div_bound", div_bound);
  row("lq_loc", lq_loc);
  row("w1q_loc", w1q_loc);
  row("growth", growth);
  return out;
}

}  // namespace pathwise
