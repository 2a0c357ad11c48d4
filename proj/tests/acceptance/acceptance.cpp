// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "pathwise/analytic.hpp"
#include "pathwise/config.hpp"
#include "pathwise/convergence.hpp"
#include "pathwise/csv.hpp"
#include "pathwise/experiments.hpp"
#include "pathwise/hypotheses.hpp"
#include "pathwise/renormalization.hpp"
#include "pathwise/spde.hpp"
#include "pathwise/weak.hpp"
#include "support/fixtures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

using namespace pathwise;
namespace fs = std::filesystem;

namespace {

/// Datum of the translation criteria: 16 nodes per radius on the coarsest
/// grid of the refinement ladder.
constexpr double kBumpRadius = 2.0;

/// Collects the checks of one criterion and the numbers behind them.
class Criterion {
public:
  void check(bool ok, const std::string& what) {
    pass_ = pass_ && ok;
    if (!detail_.empty()) detail_ += "; ";
    detail_ += (ok ? "" : "[x] ") + what;
  }
  bool pass() const { return pass_; }
  const std::string& detail() const { return detail_; }

private:
  bool pass_ = true;
  std::string detail_;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

SpdeOptions options(double dt, Scheme scheme, int snapshot_every, double p) {
  SpdeOptions o;
  o.transport.dt = dt;
  o.transport.T = 1.0;
  o.transport.scheme = scheme;
  o.transport.snapshot_every = snapshot_every;
  o.p = p;
  return o;
}

/// sup over snapshots of ||u(t) - u0(x - c t - B(t))||_p, against the
/// analytic datum sampled at the shifted nodes.
double translation_error(const SpdeSolution& sol, const AnalyticField& u0, const Vec& c, double p) {
  double e = 0.0;
  for (std::size_t m = 0; m < sol.times.size(); ++m) {
    const double t = sol.times[m];
    const Vec w = eval_path(sol.path, t);
    Vec shift{};
    for (int a = 0; a < sol.grid().dimension(); ++a) shift[a] = c[a] * t + w[a];
    e = std::max(e, lp_distance(sol.snapshots[m], sample(sol.grid(), u0, shift), p));
  }
  return e;
}

double fitted_order(const std::vector<double>& N, const std::vector<double>& err) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(N.size());
  for (std::size_t i = 0; i < N.size(); ++i) {
    const double x = std::log2(N[i]);
    const double y = std::log2(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string ladder_text(const std::vector<double>& errors) {
  std::string s = "{";
  for (std::size_t i = 0; i < errors.size(); ++i) s += (i ? ", " : "") + num(errors[i]);
  return s + "}";
}

// 1. Pure noise: the solver output is the datum translated by the path.
Criterion pure_noise() {
  Criterion c;
  const auto start = std::chrono::steady_clock::now();
  const SpatialGrid g(1, 4.0, 512);
  const AnalyticField u0 = make_bump(1, Vec{}, kBumpRadius);
  const SamplePath B = sample_brownian(0, 1.0, 2048, 1);
  const SpdeSolution sol =
      solve_spde(make_constant_drift(1, Vec{}), B, sample(g, u0), options(1.0 / 2048, Scheme::semi_lagrangian, 128, 1.0));
  const double norm = lp_norm(sample(g, u0), 1.0);
  const double err = translation_error(sol, u0, Vec{}, 1.0);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.check(sol.snapshots.size() == 17, std::to_string(sol.snapshots.size() - 1) + " snapshot intervals");
  c.check(err <= 1e-3 * norm, "sup_t L1 error / ||u0||_1 = " + num(err / norm) + " <= 1e-3");
  c.check(seconds < 10.0, "runtime " + num(seconds) + " s < 10 s");
  return c;
}

// 2. Constant drift: translation by t + B(t); refinement orders of both schemes.
Criterion constant_drift() {
  Criterion c;
  const AnalyticField u0 = make_bump(1, Vec{}, kBumpRadius);
  const DriftField b = make_constant_drift(1, Vec{1.0});
  const SamplePath B = sample_brownian(0, 1.0, 2048, 1);
  std::vector<double> levels;
  std::map<Scheme, std::vector<double>> errors;
  double at_512 = 0.0;
  double norm_512 = 0.0;
  for (int N : {64, 128, 256, 512}) {
    const SpatialGrid g(1, 4.0, N);
    levels.push_back(N);
    for (Scheme s : {Scheme::semi_lagrangian, Scheme::upwind_fv}) {
      const SpdeSolution sol = solve_spde(b, B, sample(g, u0), options(1.0 / 2048, s, 128, 1.0));
      errors[s].push_back(translation_error(sol, u0, Vec{1.0}, 1.0));
    }
    if (N == 512) {
      at_512 = errors[Scheme::semi_lagrangian].back();
      norm_512 = lp_norm(sample(g, u0), 1.0);
    }
  }
  // Empirical order of a ladder: the one between its two finest levels.
  const auto finest_order = [&](Scheme s) {
    return ConvergenceTable::build("", levels, errors[s]).rows.back().order.value().value;
  };
  const double sl_order = finest_order(Scheme::semi_lagrangian);
  const double fv_order = finest_order(Scheme::upwind_fv);
  c.check(at_512 <= 5e-3 * norm_512, "semi-Lagrangian error / ||u0||_1 at N=512 = " + num(at_512 / norm_512) + " <= 5e-3");
  c.check(sl_order >= 2.5, "semi-Lagrangian order " + num(sl_order) + " >= 2.5 (fitted " +
                               num(fitted_order(levels, errors[Scheme::semi_lagrangian])) + ") " +
                               ladder_text(errors[Scheme::semi_lagrangian]));
  c.check(fv_order >= 0.4 && fv_order <= 1.2, "upwind order " + num(fv_order) + " in [0.4, 1.2] (fitted " +
                                                  num(fitted_order(levels, errors[Scheme::upwind_fv])) + ") " +
                                                  ladder_text(errors[Scheme::upwind_fv]));
  return c;
}

// 3. Divergence-free drift conserves every L^p norm.
Criterion norm_conservation() {
  Criterion c;
  const SpatialGrid g(2, 4.0, 256);
  const ScalarField u0 = sample(g, make_bump(2, Vec{0.5, -0.4, 0.0}, 1.5));
  const DriftField b = make_stream_drift(4.0);
  const SamplePath B = sample_brownian(0, 1.0, 64, 2);
  const SpdeSolution sol = solve_spde(b, B, u0, options(1.0 / 64, Scheme::semi_lagrangian, 4, 2.0));
  for (double p : {1.0, 2.0}) {
    const double n0 = lp_norm(u0, p);
    double worst = 0.0;
    for (const ScalarField& u : sol.snapshots) worst = std::max(worst, std::abs(lp_norm(u, p) - n0));
    c.check(worst <= 1e-2 * n0, "p=" + num(p) + ": max |dnorm| / norm = " + num(worst / n0) + " <= 1e-2");
  }
  return c;
}

// 4. Gronwall envelope for the smoothed truncation with p = 1 under b = -x.
Criterion gronwall() {
  Criterion c;
  const SpatialGrid g(1, 8.0, 1024);
  const ScalarField u0 = sample(g, make_bump(1, Vec{}, 2.0));
  const DriftField b = make_linear_drift(1, -1.0);
  const SamplePath B = sample_brownian(0, 1.0, 64, 1);
  const SpdeSolution sol = solve_spde(b, B, u0, options(1.0 / 64, Scheme::semi_lagrangian, 4, 1.0));
  const HypothesisReport hyp = check_hypotheses(b, 2.0, Box::of_grid(g), 1.0, 1000);
  const RenormalizationReport r = renormalize_check(sol, make_smoothed_truncation(100.0, 1.0), hyp);
  c.check(std::abs(hyp.div_bound.value - 1.0) <= 1e-12, "C = " + num(hyp.div_bound.value));
  bool under = true;
  double worst_decay = 0.0;
  double mass0 = 0.0;
  for (double v : sol.underlying.snapshots.front().values()) mass0 += std::abs(v);
  mass0 *= g.cell_volume();
  for (std::size_t m = 0; m < r.times.size(); ++m) {
    const double t = r.times[m];
    under = under && r.integral[m] <= std::exp(1.1 * t) * r.integral.front();
    double mass = 0.0;
    for (double v : sol.underlying.snapshots[m].values()) mass += std::abs(v);
    mass *= g.cell_volume();
    worst_decay = std::max(worst_decay, std::abs(mass - std::exp(-t) * mass0) / (std::exp(-t) * mass0));
  }
  c.check(under && r.status == CheckStatus::pass, "int beta(V(t)) <= e^{1.1 t} int beta(V(0)) at all " +
                                                      std::to_string(r.times.size()) + " snapshots");
  c.check(worst_decay <= 0.02, "int |V(t)| vs e^{-t} int |u0|: max relative gap " + num(worst_decay) + " <= 0.02");
  return c;
}

// 5. Weak identity on the closed-form pure-noise solution.
Criterion weak_identity() {
  Criterion c;
  const AnalyticField u0 = make_bump(1, Vec{}, 1.0);
  const SamplePath fine = sample_brownian(0, 1.0, 4096, 1);
  const std::vector<TestFunction> phis = make_test_functions(SpatialGrid(1, 4.0, 512), 10, 0);
  const DriftField zero = make_constant_drift(1, Vec{});
  std::vector<double> strat;
  std::vector<double> ito;
  double worst_ratio = 0.0;
  for (int level = 0; level < 2; ++level) {
    const SpatialGrid g(1, 4.0, 512 << level);
    const SamplePath B = restrict_to_knots(fine, 2048 << level);
    const SpdeSolution sol = fixture::translated_solution(g, u0, B, 1.0);
    const double u0_l1 = lp_norm(sol.snapshots.front(), 1.0);
    double s_max = 0.0;
    double i_max = 0.0;
    for (const TestFunction& phi : phis) {
      const double r = weak_residual(sol, zero, B, phi, 1.0).max_abs();
      worst_ratio = std::max(worst_ratio, r / (u0_l1 * phi.sup()));
      s_max = std::max(s_max, r);
      i_max = std::max(i_max, weak_residual(sol, zero, B, phi, 1.0, StochasticRule::left_point).max_abs());
    }
    strat.push_back(s_max);
    ito.push_back(i_max);
  }
  c.check(worst_ratio <= 1e-2, "max residual / (||u0||_1 ||phi||_inf) = " + num(worst_ratio) + " <= 1e-2");
  c.check(strat[0] >= 3.0 * strat[1], "halving h and dt: " + num(strat[0]) + " -> " + num(strat[1]) + " (ratio " +
                                           num(strat[0] / strat[1]) + " >= 3)");
  c.check(ito[1] >= 5.0 * strat[1], "left-point residual " + num(ito[1]) + " >= 5 x Stratonovich " + num(strat[1]));
  return c;
}

// 6. Semi-Lagrangian and upwind agree in the limit.
Criterion uniqueness() {
  Criterion c;
  const ExperimentConfig constant = parse_config(R"({"d": 1, "L": 4, "N": 1024, "T": 1, "dt": 0.00390625, "p": 1,
      "drift": {"id": "constant", "c": [1.0]}, "u0": {"id": "bump", "radius": 1.0}})");
  const SamplePath B = sample_brownian(0, 1.0, constant.steps(), 1);
  const UniquenessStudy s = uniqueness_study(constant, B, {128, 256, 512, 1024}, 16);
  const double bound = 2.0 * (s.oracle_sl->back() + s.oracle_fv->back());
  c.check(s.table.decreasing_tail(4), "constant drift: discrepancy " + ladder_text(s.table.errors()) + " decreasing");
  c.check(s.table.rows.back().error <= bound,
          "final " + num(s.table.rows.back().error) + " <= 2 x oracle sum " + num(bound));

  const ExperimentConfig rough = parse_config(R"({"d": 1, "L": 4, "N": 1024, "T": 1, "dt": 0.0009765625, "p": 1,
      "drift": {"id": "power1d", "alpha": 0.75}, "u0": {"id": "bump", "radius": 1.0}, "mollify_eps": "auto"})");
  const HypothesisReport admissible = check_hypotheses(build_drift(rough), 2.0, Box::of_grid(rough.grid()), 1.0,
                                                       kHypothesisSamples);
  c.check(admissible.w1q_loc.ok, "alpha=0.75 W^{1,2}_loc evidence " + num(admissible.w1q_loc.value));
  const SamplePath Br = sample_brownian(0, 1.0, rough.steps(), 1);
  const UniquenessStudy r = uniqueness_study(rough, Br, {128, 256, 512, 1024}, 64);
  c.check(r.table.decreasing_tail(4), "alpha=0.75 mollified: discrepancy " + ladder_text(r.table.errors()) + " decreasing");
  return c;
}

// 7. Wong-Zakai approximants converge to the Stratonovich solution.
Criterion wong_zakai() {
  Criterion c;
  // The path mesh K = 256 is the finest level.
  const ExperimentConfig linear = parse_config(R"({"d": 1, "L": 4, "N": 512, "T": 1, "dt": 0.00390625, "p": 2,
      "drift": {"id": "linear", "scale": -0.5}, "u0": {"id": "bump", "radius": 1.0},
      "wz_levels": [4, 8, 16, 32, 64, 128, 256]})");
  const SamplePath B = sample_brownian(0, 1.0, linear.steps(), 1);
  const WongZakaiStudy s = wong_zakai_study(linear, B, 1);
  const std::vector<double> e = s.table.errors();
  c.check(s.table.non_increasing_tail(4), "E_n " + ladder_text(e) + " non-increasing over the last 4");
  c.check(e.back() <= 0.05 * s.reference_norm, "E_256 / ||u0||_2 = " + num(e.back() / s.reference_norm) + " <= 0.05");
  c.check(e.back() == 0.0, "E_K = " + num(e.back()) + " at K = " + std::to_string(linear.steps()));

  ExperimentConfig pure = linear;
  pure.drift = DriftSpec{};
  const WongZakaiStudy z = wong_zakai_study(pure, B, 1);
  const SpatialGrid g = pure.grid();
  const AnalyticField u0 = build_initial(pure);
  const ScalarField u0_grid = sample(g, u0);
  const double grad = lp_norm(sample_gradient_magnitude(g, u0), pure.p);
  double interp = 0.0;
  std::vector<SamplePath> paths{B};
  for (int n : pure.wz_levels) paths.push_back(piecewise_linear_approx(B, n));
  for (const SamplePath& w : paths) {
    for (const Vec& shift : w.values()) {
      interp = std::max(interp, lp_distance(shift_field(u0_grid, shift), sample(g, u0, shift), pure.p));
    }
  }
  double worst = 0.0;
  bool within = true;
  for (std::size_t i = 0; i < pure.wz_levels.size(); ++i) {
    const double bound = grad * z.sup_distances[i] + 2.0 * interp;
    within = within && z.table.rows[i].error <= bound;
    worst = std::max(worst, z.table.rows[i].error / bound);
  }
  c.check(within, "b=0: E_n <= ||grad u0||_2 sup|B_n - B| + 2 x interpolation (" + num(interp) +
                      "), max ratio " + num(worst));
  return c;
}

// 8. Hypothesis checker classifies the catalog.
Criterion hypotheses() {
  Criterion c;
  const SpatialGrid g(1, 4.0, 512);
  const Box window = Box::of_grid(g);
  const Box window2 = Box::of_grid(SpatialGrid(2, 4.0, 64));
  bool stable = true;
  const auto audit = [&](const HypothesisReport& r) {
    for (const Evidence* e : {&r.div_bound, &r.lq_loc, &r.w1q_loc, &r.growth}) {
      if (e->ok) stable = stable && e->relative_change() <= 0.05;
    }
    return r;
  };
  const HypothesisReport constant = audit(check_hypotheses(make_constant_drift(1, Vec{1.0}), 2.0, window, 1.0, kHypothesisSamples));
  c.check(constant.div_bound.ok && constant.lq_loc.ok && constant.w1q_loc.ok && constant.growth.ok &&
              constant.div_bound.value == 0.0,
          "constant: all PASS, C = " + num(constant.div_bound.value));
  const HypothesisReport stream = audit(check_hypotheses(make_stream_drift(4.0), 2.0, window2, 1.0, kHypothesisSamples));
  c.check(stream.div_bound.ok && stream.div_bound.value <= 1e-8, "stream: divergence-free, C = " + num(stream.div_bound.value));
  const HypothesisReport rough = audit(check_hypotheses(make_power_drift(0.25, 4.0), 2.0, window, 1.0, kHypothesisSamples));
  c.check(!rough.w1q_loc.ok, "alpha=0.25: W^{1,2}_loc FAIL (" + num(rough.w1q_loc.value) + " -> " +
                                 num(rough.w1q_loc.doubled) + " under doubling)");
  const HypothesisReport mild = audit(check_hypotheses(make_power_drift(0.75, 4.0), 2.0, window, 1.0, kHypothesisSamples));
  c.check(mild.w1q_loc.ok, "alpha=0.75: W^{1,2}_loc PASS (" + num(mild.w1q_loc.value) + " -> " +
                               num(mild.w1q_loc.doubled) + ")");
  c.check(stable, "every PASS verdict stable within 5% under doubling");
  return c;
}

// 9. Brownian increments have the right variance; runs are reproducible.
Criterion statistics_and_determinism() {
  Criterion c;
  const int K = 10000;
  int in_band = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const SamplePath B = sample_brownian(seed, 1.0, K, 1);
    double sum = 0.0;
    for (int k = 0; k < K; ++k) {
      const double inc = B.values()[k + 1][0] - B.values()[k][0];
      sum += inc * inc;
    }
    const double normalized = sum / (K * (1.0 / K));
    if (normalized >= 0.96 && normalized <= 1.04) ++in_band;
  }
  c.check(in_band >= 190, std::to_string(in_band) + "/200 seeds with normalized variance in [0.96, 1.04]");

  const fs::path root = fs::temp_directory_path() / "pathwise_acceptance_determinism";
  fs::remove_all(root);
  const ExperimentConfig cfg = parse_config(R"({"d": 1, "L": 4, "N": 256, "T": 1, "dt": 0.00390625, "p": 2, "seed": 7,
      "drift": {"id": "linear", "scale": -0.5}, "u0": {"id": "bump", "radius": 1.0}})");
  std::vector<std::map<std::string, std::string>> trees;
  for (const char* run : {"a", "b"}) {
    RunOptions opts;
    opts.out = root / run;
    cmd_solve(cfg, opts);
    std::map<std::string, std::string> tree;
    for (const auto& e : fs::recursive_directory_iterator(root / run)) {
      if (e.is_regular_file()) tree[fs::relative(e.path(), root / run).string()] = csv::read_file(e.path());
    }
    trees.push_back(std::move(tree));
  }
  fs::remove_all(root);
  c.check(!trees[0].empty() && trees[0] == trees[1],
          "two solve runs gave " + std::to_string(trees[0].size()) + " byte-identical files");
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Criterion()>>> criteria = {
      {"pure-noise translation oracle", pure_noise},
      {"constant-drift representation and refinement", constant_drift},
      {"norm conservation under divergence-free drift", norm_conservation},
      {"Gronwall envelope for the smoothed truncation", gronwall},
      {"weak-form identity with Stratonovich integral", weak_identity},
      {"semi-Lagrangian vs upwind cross-check", uniqueness},
      {"Wong-Zakai convergence", wong_zakai},
      {"hypothesis checker classification", hypotheses},
      {"Brownian statistics and determinism", statistics_and_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Criterion c;
    const auto start = std::chrono::steady_clock::now();
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.check(false, std::string("threw: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("CRITERION %zu %s: %s | %s | %.1f s\n", i + 1, c.pass() ? "PASS" : "FAIL", criteria[i].first.c_str(),
                c.detail().c_str(), seconds);
    std::fflush(stdout);
    if (!c.pass()) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
