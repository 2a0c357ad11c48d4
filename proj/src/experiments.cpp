#include "pathwise/experiments.hpp"

#include "pathwise/csv.hpp"
#include "pathwise/errors.hpp"
#include "pathwise/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

namespace pathwise {

namespace fs = std::filesystem;

namespace {

struct ManifestRow {
  std::string scheme;
  int N = 0;
  std::string path_kind;
  int n_level = 0;
};

std::string manifest_csv(const ExperimentConfig& cfg, const SamplePath* B, const std::vector<ManifestRow>& rows) {
  std::string out = "seed,scheme,N,dt,p,drift_id,path_kind,n_level\n";
  const std::string seed = B && !B->seed() ? std::string() : std::to_string(cfg.seed);
  for (const auto& r : rows) {
    out += seed + "," + r.scheme + "," + std::to_string(r.N) + "," + csv::number(cfg.dt) + "," + csv::number(cfg.p) +
           "," + cfg.drift.id + "," + r.path_kind + "," + std::to_string(r.n_level) + "\n";
  }
  return out;
}

using Provenance = std::vector<std::pair<std::string, std::string>>;

/// Writes config.json, provenance.csv, manifest.csv and (when given) path.csv.
void write_run_header(const fs::path& dir, const std::string& command, const ExperimentConfig& cfg,
                      const SamplePath* B, bool path_from_file, const std::vector<ManifestRow>& rows,
                      const Provenance& extra) {
  csv::write_file(dir / "config.json", to_json(cfg));
  Provenance prov = {
      {"command", command},
      {"config_hash", config_hash(cfg)},
      {"seed", std::to_string(cfg.seed)},
      {"path_source", B ? (path_from_file ? "file" : "sampled") : "none"},
      {"tolerance_version", std::to_string(kToleranceVersion)},
      {"weak_tolerance", csv::number(kWeakTolerance)},
      {"wong_zakai_fraction", csv::number(kWongZakaiFraction)},
      {"finiteness_threshold", csv::number(kFinitenessThreshold)},
      {"stability_tolerance", csv::number(kStabilityTolerance)},
      {"hypothesis_samples", std::to_string(kHypothesisSamples)},
      {"max_cfl", csv::number(kMaxCfl)},
  };
  prov.insert(prov.end(), extra.begin(), extra.end());
  std::string text = "key,value\n";
  for (const auto& [k, v] : prov) text += k + "," + v + "\n";
  csv::write_file(dir / "provenance.csv", text);
  csv::write_file(dir / "manifest.csv", manifest_csv(cfg, B, rows));
  if (B) csv::write_file(dir / "path.csv", path_to_csv(*B));
}

fs::path output_dir(const ExperimentConfig& cfg, const RunOptions& opts) {
  return opts.out ? *opts.out : fs::path(cfg.out_dir);
}

std::string padded(std::size_t m) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04zu", m);
  return buf;
}

double max_distance(const std::vector<ScalarField>& a, const std::vector<ScalarField>& b, double p) {
  double e = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) e = std::max(e, lp_distance(a[m], b[m], p));
  return e;
}

bool has_closed_form(const ExperimentConfig& cfg) {
  return (cfg.drift.id == "zero" || cfg.drift.id == "constant") && !cfg.drift.modulation;
}

/// Each step strictly decreases, or both ends are exactly zero.
bool settles(const std::vector<double>& e, std::size_t count) {
  const std::size_t n = e.size();
  const std::size_t start = n > count ? n - count : 0;
  for (std::size_t i = start + 1; i < n; ++i) {
    if (!(e[i] < e[i - 1]) && !(e[i] == 0.0 && e[i - 1] == 0.0)) return false;
  }
  return true;
}

DriftField effective_drift(const ExperimentConfig& cfg, const SpatialGrid& grid) {
  const DriftField b = build_drift(cfg);
  const double eps = mollify_radius(cfg, b, grid);
  return eps > 0.0 ? make_mollified(b, eps) : b;
}

std::string verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

CommandResult write_weak_outputs(const fs::path& dir, const WeakResidualReport& report) {
  csv::write_file(dir / "weak_residual.csv", report.to_csv());
  std::string summary = "phi_index,max_abs,normalizer,normalized\n";
  for (std::size_t j = 0; j < report.series.size(); ++j) {
    const auto& s = report.series[j];
    const double m = s.max_abs();
    summary += std::to_string(j) + "," + csv::number(m) + "," + csv::number(s.normalizer) + "," +
               csv::number(s.normalizer > 0.0 ? m / s.normalizer : 0.0) + "\n";
  }
  csv::write_file(dir / "weak_summary.csv", summary);
  const bool pass = report.max_normalized <= kWeakTolerance;
  return {pass, verdict(pass) + " verify-weak: max normalized residual " + csv::number(report.max_normalized) +
                    " (tolerance " + csv::number(kWeakTolerance) + "), max |r| " + csv::number(report.max_abs)};
}

std::string wz_paths_csv(const WongZakaiStudy& s) {
  std::string out = "level,sup_distance\n";
  for (std::size_t i = 0; i < s.table.rows.size(); ++i) {
    out += csv::number(s.table.rows[i].level) + "," + csv::number(s.sup_distances[i]) + "\n";
  }
  return out;
}

bool wong_zakai_pass(const ConvergenceTable& table, double reference_norm) {
  if (table.rows.empty()) return false;
  const double last = table.rows.back().error;
  return table.non_increasing_tail(4) && last <= kWongZakaiFraction * reference_norm && last == 0.0;
}

}  // namespace

ExperimentConfig with_overrides(ExperimentConfig cfg, const RunOptions& opts) {
  if (opts.seed) cfg.seed = *opts.seed;
  return cfg;
}

SamplePath driving_path(const ExperimentConfig& cfg, const RunOptions& opts) {
  const int K = cfg.steps();
  if (!opts.path_file) return sample_brownian(cfg.seed, cfg.T, K, cfg.d);
  std::string text;
  try {
    text = csv::read_file(*opts.path_file);
  } catch (const Error& e) {
    throw ConfigurationError("cannot read path file '" + opts.path_file->string() + "': " + e.what());
  }
  SamplePath B = path_from_csv(text);
  if (B.dimension() != cfg.d) throw ConfigurationError("path file dimension does not match d");
  if (B.steps() != K) {
    throw ConfigurationError("path file has " + std::to_string(B.steps()) + " steps, config needs T/dt = " +
                             std::to_string(K));
  }
  if (std::abs(B.horizon() - cfg.T) > 1e-12 * cfg.T) throw ConfigurationError("path file horizon does not match T");
  return B;
}

int default_snapshot_every(int steps) { return steps % 16 == 0 ? steps / 16 : 1; }

SpdeOptions spde_options(const ExperimentConfig& cfg, const DriftField& b, const SpatialGrid& grid,
                         int snapshot_every) {
  SpdeOptions opt;
  opt.transport.dt = cfg.dt;
  opt.transport.T = cfg.T;
  opt.transport.scheme = cfg.scheme;
  opt.transport.snapshot_every = snapshot_every;
  opt.transport.mollify_eps = mollify_radius(cfg, b, grid);
  opt.p = cfg.p;
  return opt;
}

SpdeSolution run_solve(const ExperimentConfig& cfg, const SamplePath& B, int snapshot_every) {
  const SpatialGrid grid = cfg.grid();
  const DriftField b = build_drift(cfg);
  check_cfl(cfg, b, B, grid);
  const ScalarField u0 = sample(grid, build_initial(cfg));
  return solve_spde(b, B, u0, spde_options(cfg, b, grid, snapshot_every));
}

WeakResidualReport weak_audit(const ExperimentConfig& cfg, const SpdeSolution& sol) {
  const DriftField b = effective_drift(cfg, sol.grid());
  std::vector<WeakResidualSeries> series;
  for (const TestFunction& phi : make_test_functions(sol.grid(), cfg.phi_count, cfg.seed)) {
    series.push_back(weak_residual(sol, b, sol.path, phi, cfg.p));
  }
  return summarize(std::move(series));
}

HypothesisReport hypothesis_audit(const ExperimentConfig& cfg) {
  const double q = LebesgueExponent(cfg.p).q();
  return check_hypotheses(build_drift(cfg), q, Box::of_grid(cfg.grid()), cfg.T, kHypothesisSamples);
}

std::vector<int> uniqueness_ladder(const ExperimentConfig& cfg) {
  if (cfg.N % 8 != 0 || cfg.N / 8 < 8) {
    throw ConfigurationError("uniqueness ladder N/8 .. N needs N divisible by 8 and N >= 64");
  }
  return {cfg.N / 8, cfg.N / 4, cfg.N / 2, cfg.N};
}

UniquenessStudy uniqueness_study(const ExperimentConfig& cfg, const SamplePath& B, const std::vector<int>& ladder,
                                 int snapshot_every) {
  if (ladder.empty()) throw ConfigurationError("uniqueness ladder is empty");
  const DriftField b = build_drift(cfg);
  const AnalyticField u0 = build_initial(cfg);
  ExperimentConfig upwind = cfg;
  upwind.scheme = Scheme::upwind_fv;
  check_cfl(upwind, b, B, cfg.grid(*std::max_element(ladder.begin(), ladder.end())));

  UniquenessStudy study;
  study.ladder = ladder;
  study.hypotheses = hypothesis_audit(cfg);
  study.exploratory = !study.hypotheses.uniqueness_hypotheses_ok();
  const bool oracle = has_closed_form(cfg);
  if (oracle) {
    study.oracle_sl.emplace();
    study.oracle_fv.emplace();
  }

  std::vector<double> levels;
  std::vector<double> errors;
  for (int N : ladder) {
    const SpatialGrid grid = cfg.grid(N);
    const ScalarField u0_grid = sample(grid, u0);
    SpdeOptions opt = spde_options(cfg, b, grid, snapshot_every);
    opt.transport.scheme = Scheme::semi_lagrangian;
    const SpdeSolution sl = solve_spde(b, B, u0_grid, opt);
    opt.transport.scheme = Scheme::upwind_fv;
    const SpdeSolution fv = solve_spde(b, B, u0_grid, opt);
    levels.push_back(N);
    errors.push_back(max_distance(sl.snapshots, fv.snapshots, cfg.p));
    if (oracle) {
      std::vector<ScalarField> exact;
      for (double t : sl.times) exact.push_back(exact_solution(b, B, u0, grid, t));
      study.oracle_sl->push_back(max_distance(sl.snapshots, exact, cfg.p));
      study.oracle_fv->push_back(max_distance(fv.snapshots, exact, cfg.p));
    }
  }
  study.table = ConvergenceTable::build("uniqueness", levels, errors);
  study.pass = settles(errors, 3);
  return study;
}

WongZakaiStudy wong_zakai_study(const ExperimentConfig& cfg, const SamplePath& B, int snapshot_every) {
  const int K = B.steps();
  const std::vector<int>& levels = cfg.wz_levels;
  if (levels.empty() || levels.back() != K) {
    throw ConfigurationError("the largest Wong-Zakai level must equal the path mesh K = " + std::to_string(K));
  }
  for (int n : levels) {
    if (n < 1 || K % n != 0) {
      throw ConfigurationError("Wong-Zakai level " + std::to_string(n) + " does not divide K = " + std::to_string(K));
    }
  }
  const SpatialGrid grid = cfg.grid();
  const DriftField b = build_drift(cfg);
  check_cfl(cfg, b, B, grid);
  const ScalarField u0 = sample(grid, build_initial(cfg));
  const SpdeOptions opt = spde_options(cfg, b, grid, snapshot_every);
  const SpdeSolution reference = solve_spde(b, B, u0, opt);

  WongZakaiStudy study;
  study.reference_norm = lp_norm(u0, cfg.p);
  std::vector<double> lv;
  std::vector<double> errors;
  for (int n : levels) {
    const SamplePath Bn = piecewise_linear_approx(B, n);
    const SpdeSolution approx = solve_spde_wong_zakai(b, Bn, u0, opt);
    lv.push_back(n);
    errors.push_back(max_distance(approx.snapshots, reference.snapshots, cfg.p));
    study.sup_distances.push_back(sup_distance(Bn, B));
  }
  study.table = ConvergenceTable::build("wong_zakai", lv, errors);
  study.pass = wong_zakai_pass(study.table, study.reference_norm);
  return study;
}

WongZakaiStudy worst_case(const std::vector<WongZakaiStudy>& studies, const ExperimentConfig&) {
  if (studies.empty()) throw ConfigurationError("worst case of no studies");
  WongZakaiStudy worst = studies.front();
  std::vector<double> errors = worst.table.errors();
  std::vector<double> levels;
  for (const auto& r : worst.table.rows) levels.push_back(r.level);
  for (std::size_t s = 1; s < studies.size(); ++s) {
    const auto e = studies[s].table.errors();
    if (e.size() != errors.size()) throw ConfigurationError("studies differ in their levels");
    for (std::size_t i = 0; i < e.size(); ++i) {
      errors[i] = std::max(errors[i], e[i]);
      worst.sup_distances[i] = std::max(worst.sup_distances[i], studies[s].sup_distances[i]);
    }
  }
  worst.table = ConvergenceTable::build("wong_zakai_worst", levels, errors);
  worst.pass = wong_zakai_pass(worst.table, worst.reference_norm);
  return worst;
}

CommandResult cmd_solve(const ExperimentConfig& cfg_in, const RunOptions& opts) {
  const ExperimentConfig cfg = with_overrides(cfg_in, opts);
  const SamplePath B = driving_path(cfg, opts);
  const int every = opts.snapshot_every > 0 ? opts.snapshot_every : default_snapshot_every(cfg.steps());
  const SpdeSolution sol = run_solve(cfg, B, every);
  const fs::path dir = output_dir(cfg, opts);

  write_run_header(dir, "solve", cfg, &B, opts.path_file.has_value(),
                   {{to_string(cfg.scheme), cfg.N, to_string(B.kind()), B.level()}},
                   {{"snapshot_every", std::to_string(every)},
                    {"mollify_eps", csv::number(sol.underlying.mollify_eps)},
                    {"support_warnings", std::to_string(sol.underlying.support_warnings)}});
  std::string index = "index,step,t,u_file,v_file\n";
  std::string norms = "t,norm_u,norm_v\n";
  for (std::size_t m = 0; m < sol.times.size(); ++m) {
    const std::string u_file = "u_t" + padded(m) + ".csv";
    const std::string v_file = "v_t" + padded(m) + ".csv";
    write_field(dir / u_file, sol.snapshots[m]);
    write_field(dir / v_file, sol.underlying.snapshots[m]);
    index += std::to_string(m) + "," + std::to_string(sol.underlying.snapshot_steps[m]) + "," +
             csv::number(sol.times[m]) + "," + u_file + "," + v_file + "\n";
    norms += csv::number(sol.times[m]) + "," + csv::number(lp_norm(sol.snapshots[m], cfg.p)) + "," +
             csv::number(lp_norm(sol.underlying.snapshots[m], cfg.p)) + "\n";
  }
  csv::write_file(dir / "snapshots.csv", index);
  csv::write_file(dir / "norms.csv", norms);

  std::string summary = "PASS solve: " + std::to_string(sol.times.size()) + " snapshots in " + dir.string() +
                        ", final ||u||_p = " + csv::number(lp_norm(sol.snapshots.back(), cfg.p));
  if (sol.underlying.support_warnings > 0) {
    summary += " (warning: " + std::to_string(sol.underlying.support_warnings) +
               " characteristic feet near the box boundary)";
  }
  return {true, summary};
}

StoredRun load_run(const fs::path& run_dir) {
  const auto need = [&](const std::string& name) {
    const fs::path f = run_dir / name;
    if (!fs::exists(f)) throw ConfigurationError("missing run artifact " + f.string());
    return csv::read_file(f);
  };
  ExperimentConfig cfg = parse_config(need("config.json"));
  SamplePath B = path_from_csv(need("path.csv"));
  const SpatialGrid grid = cfg.grid();

  TransportSolution v(grid);
  v.scheme = cfg.scheme;
  v.dt = cfg.dt;
  v.steps = cfg.steps();
  std::vector<ScalarField> u;
  const auto lines = need("snapshots.csv");
  std::size_t pos = lines.find('\n');
  if (pos == std::string::npos || lines.substr(0, pos) != "index,step,t,u_file,v_file") {
    throw ConfigurationError("snapshots.csv has an unexpected header");
  }
  while (++pos < lines.size()) {
    const std::size_t end = lines.find('\n', pos);
    const std::string line = lines.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    pos = end == std::string::npos ? lines.size() : end;
    if (line.empty()) continue;
    const auto cols = csv::split(line);
    if (cols.size() != 5) throw ConfigurationError("snapshots.csv row has the wrong column count");
    v.snapshot_steps.push_back(static_cast<int>(csv::parse_int(cols[1])));
    v.times.push_back(csv::parse_double(cols[2]));
    const ScalarField uf = field_from_csv(need(cols[3]));
    const ScalarField vf = field_from_csv(need(cols[4]));
    if (!(uf.grid() == grid) || !(vf.grid() == grid)) {
      throw ConfigurationError("snapshot grid does not match the stored config");
    }
    u.push_back(uf);
    v.snapshots.push_back(vf);
  }
  if (u.empty()) throw ConfigurationError("run has no snapshots");
  std::vector<double> times = v.times;
  SpdeSolution sol{.times = std::move(times), .snapshots = std::move(u), .path = std::move(B),
                   .underlying = std::move(v), .p = cfg.p};
  return {std::move(cfg), std::move(sol)};
}

CommandResult cmd_verify_weak(const ExperimentConfig& cfg_in, const RunOptions& opts) {
  const ExperimentConfig cfg = with_overrides(cfg_in, opts);
  const SamplePath B = driving_path(cfg, opts);
  const int every = opts.snapshot_every > 0 ? opts.snapshot_every : 1;
  const SpdeSolution sol = run_solve(cfg, B, every);
  const fs::path dir = output_dir(cfg, opts);
  write_run_header(dir, "verify-weak", cfg, &B, opts.path_file.has_value(),
                   {{to_string(cfg.scheme), cfg.N, to_string(B.kind()), B.level()}},
                   {{"snapshot_every", std::to_string(every)}});
  return write_weak_outputs(dir, weak_audit(cfg, sol));
}

CommandResult cmd_verify_weak_stored(const fs::path& run_dir, const RunOptions& opts) {
  const StoredRun run = load_run(run_dir);
  const fs::path dir = opts.out ? *opts.out : run_dir;
  return write_weak_outputs(dir, weak_audit(run.config, run.solution));
}

CommandResult cmd_uniqueness_crosscheck(const ExperimentConfig& cfg_in, const RunOptions& opts) {
  const ExperimentConfig cfg = with_overrides(cfg_in, opts);
  const SamplePath B = driving_path(cfg, opts);
  const int every = opts.snapshot_every > 0 ? opts.snapshot_every : default_snapshot_every(cfg.steps());
  const UniquenessStudy study = uniqueness_study(cfg, B, uniqueness_ladder(cfg), every);
  const fs::path dir = output_dir(cfg, opts);

  std::vector<ManifestRow> rows;
  for (int N : study.ladder) {
    for (Scheme s : {Scheme::semi_lagrangian, Scheme::upwind_fv}) rows.push_back({to_string(s), N, to_string(B.kind()), B.level()});
  }
  write_run_header(dir, "uniqueness", cfg, &B, opts.path_file.has_value(), rows,
                   {{"snapshot_every", std::to_string(every)}, {"exploratory", study.exploratory ? "1" : "0"}});
  csv::write_file(dir / "uniqueness.csv", study.table.to_csv());
  csv::write_file(dir / "hypotheses.csv", study.hypotheses.to_csv());
  if (study.oracle_sl) {
    std::string text = "level,oracle_semi_lagrangian,oracle_upwind_fv\n";
    for (std::size_t i = 0; i < study.ladder.size(); ++i) {
      text += std::to_string(study.ladder[i]) + "," + csv::number((*study.oracle_sl)[i]) + "," +
              csv::number((*study.oracle_fv)[i]) + "\n";
    }
    csv::write_file(dir / "uniqueness_oracle.csv", text);
  }
  std::string summary = verdict(study.pass) + " uniqueness: final discrepancy " +
                        csv::number(study.table.rows.back().error) + " at N = " + std::to_string(study.ladder.back());
  if (study.exploratory) summary += " (exploratory: drift fails its hypothesis audit)";
  return {study.pass, summary};
}

CommandResult cmd_wong_zakai(const ExperimentConfig& cfg_in, const RunOptions& opts) {
  const ExperimentConfig cfg = with_overrides(cfg_in, opts);
  if (opts.seeds < 1) throw ConfigurationError("--seeds must be at least 1");
  if (opts.seeds > 1 && opts.path_file) throw ConfigurationError("--seeds cannot be combined with --path-file");
  const int every = opts.snapshot_every > 0 ? opts.snapshot_every : default_snapshot_every(cfg.steps());
  const fs::path dir = output_dir(cfg, opts);

  const auto manifest_rows = [&](const SamplePath& B) {
    std::vector<ManifestRow> rows{{to_string(cfg.scheme), cfg.N, to_string(B.kind()), B.level()}};
    const std::string kind = B.kind() == PathKind::zero ? "zero" : to_string(PathKind::piecewise_linear_bv);
    for (int n : cfg.wz_levels) rows.push_back({to_string(cfg.scheme), cfg.N, kind, n});
    return rows;
  };

  std::vector<WongZakaiStudy> studies;
  for (int s = 0; s < opts.seeds; ++s) {
    ExperimentConfig run = cfg;
    run.seed = cfg.seed + static_cast<std::uint64_t>(s);
    const SamplePath B = driving_path(run, opts);
    studies.push_back(wong_zakai_study(run, B, every));
    const fs::path run_dir = opts.seeds == 1 ? dir : dir / ("seed_" + std::to_string(run.seed));
    write_run_header(run_dir, "wong-zakai", run, &B, opts.path_file.has_value(), manifest_rows(B),
                     {{"snapshot_every", std::to_string(every)}});
    csv::write_file(run_dir / "wong_zakai.csv", studies.back().table.to_csv());
    csv::write_file(run_dir / "wong_zakai_paths.csv", wz_paths_csv(studies.back()));
  }
  const WongZakaiStudy result = opts.seeds == 1 ? studies.front() : worst_case(studies, cfg);
  if (opts.seeds > 1) {
    csv::write_file(dir / "wong_zakai_worst.csv", result.table.to_csv());
    csv::write_file(dir / "wong_zakai_worst_paths.csv", wz_paths_csv(result));
  }
  const auto& rows = result.table.rows;
  const double before_last = rows.size() > 1 ? rows[rows.size() - 2].error : rows.back().error;
  return {result.pass, verdict(result.pass) + " wong-zakai: E_n at level " + csv::number(rows[rows.size() > 1 ? rows.size() - 2 : 0].level) +
                           " is " + csv::number(before_last) + ", ||u0||_p = " + csv::number(result.reference_norm) +
                           (opts.seeds > 1 ? ", worst case over " + std::to_string(opts.seeds) + " seeds" : "")};
}

CommandResult cmd_hypotheses(const ExperimentConfig& cfg_in, const RunOptions& opts) {
  const ExperimentConfig cfg = with_overrides(cfg_in, opts);
  const HypothesisReport report = hypothesis_audit(cfg);
  const fs::path dir = output_dir(cfg, opts);
  write_run_header(dir, "hypotheses", cfg, nullptr, false, {{to_string(cfg.scheme), cfg.N, "none", 0}},
                   {{"q", csv::number(report.q_used)}});
  csv::write_file(dir / "hypotheses.csv", report.to_csv());
  const bool pass = report.div_bound.ok && report.lq_loc.ok && report.w1q_loc.ok && report.growth.ok;
  return {pass, verdict(pass) + " hypotheses: C = " + csv::number(report.div_bound.value) +
                    ", W^{1,q} evidence " + csv::number(report.w1q_loc.value) + " -> " +
                    csv::number(report.w1q_loc.doubled) + " (q = " + csv::number(report.q_used) + ")"};
}

}  // namespace pathwise
