#include "pathwise/config.hpp"

#include "pathwise/csv.hpp"
#include "pathwise/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <set>

namespace pathwise {

namespace {

using nlohmann::json;

[[noreturn]] void reject(const std::string& key, const std::string& what) {
  throw ConfigurationError("config key '" + key + "': " + what);
}

/// Reads the members of one JSON object and remembers which keys were used,
/// so leftovers can be reported as unknown.
class ObjectReader {
public:
  ObjectReader(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) reject(prefix_.empty() ? "<root>" : prefix_, "expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json& raw(const std::string& key) {
    used_.insert(key);
    if (!obj_.contains(key)) reject(name(key), "missing");
    return obj_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) reject(name(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) reject(name(key), "must be finite");
    return x;
  }

  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  long long integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) reject(name(key), "expected an integer");
    return v.get<long long>();
  }

  long long integer(const std::string& key, long long fallback) { return has(key) ? integer(key) : fallback; }

  std::string text(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) reject(name(key), "expected a string");
    return v.get<std::string>();
  }

  Vec vec(const std::string& key, int d) {
    const json& v = raw(key);
    if (!v.is_array() || static_cast<int>(v.size()) != d) {
      reject(name(key), "expected an array of " + std::to_string(d) + " numbers");
    }
    Vec out{};
    for (int a = 0; a < d; ++a) {
      if (!v[a].is_number()) reject(name(key), "expected an array of numbers");
      out[a] = v[a].get<double>();
    }
    return out;
  }

  Vec vec(const std::string& key, int d, const Vec& fallback) { return has(key) ? vec(key, d) : fallback; }

  std::string name(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!used_.count(it.key())) reject(name(it.key()), "unknown key");
    }
  }

private:
  const json& obj_;
  std::string prefix_;
  std::set<std::string> used_;
};

json vec_json(const Vec& v, int d) {
  json a = json::array();
  for (int i = 0; i < d; ++i) a.push_back(v[i]);
  return a;
}

DriftSpec read_drift(const json& obj, int d) {
  ObjectReader r(obj, "drift");
  DriftSpec s;
  s.id = r.text("id");
  if (s.id == "zero") {
  } else if (s.id == "constant") {
    s.c = r.vec("c", d);
  } else if (s.id == "linear") {
    if (r.has("scale") == r.has("matrix")) reject("drift", "linear needs exactly one of 'scale' or 'matrix'");
    if (r.has("scale")) {
      s.scale = r.number("scale");
    } else {
      const json& m = r.raw("matrix");
      if (!m.is_array() || static_cast<int>(m.size()) != d) reject("drift.matrix", "expected a d x d array");
      Jacobian A{};
      for (int i = 0; i < d; ++i) {
        if (!m[i].is_array() || static_cast<int>(m[i].size()) != d) reject("drift.matrix", "expected a d x d array");
        for (int j = 0; j < d; ++j) {
          if (!m[i][j].is_number()) reject("drift.matrix", "expected numbers");
          A[i][j] = m[i][j].get<double>();
        }
      }
      s.matrix = A;
    }
  } else if (s.id == "stream" || s.id == "shear") {
    if (d != 2) reject("drift.id", "'" + s.id + "' needs d = 2");
    s.amplitude = r.number("amplitude", 1.0);
  } else if (s.id == "power1d") {
    if (d != 1) reject("drift.id", "'power1d' needs d = 1");
    s.alpha = r.number("alpha");
    if (!(s.alpha > 0.0)) reject("drift.alpha", "must be positive");
  } else {
    reject("drift.id", "unknown drift '" + s.id + "' (zero, constant, linear, stream, shear, power1d)");
  }
  if (r.has("modulation")) {
    ObjectReader m(r.raw("modulation"), "drift.modulation");
    s.modulation = Modulation{m.number("amplitude"), m.number("omega")};
    m.finish();
  }
  r.finish();
  return s;
}

InitialSpec read_initial(const json& obj, int d) {
  ObjectReader r(obj, "u0");
  InitialSpec s;
  s.id = r.text("id");
  if (s.id == "bump") {
    s.center = r.vec("center", d, Vec{});
    s.radius = r.number("radius", 1.0);
    s.amplitude = r.number("amplitude", 1.0);
  } else if (s.id == "double_bump") {
    s.center = r.vec("center", d);
    s.center2 = r.vec("center2", d);
    s.radius = r.number("radius", 1.0);
    s.amplitude = r.number("amplitude", 1.0);
    s.amplitude2 = r.number("amplitude2", 1.0);
  } else if (s.id == "step") {
    s.lo = r.number("lo", -1.0);
    s.hi = r.number("hi", 1.0);
    s.amplitude = r.number("amplitude", 1.0);
  } else if (s.id == "sinusoid") {
    s.wavenumber = static_cast<int>(r.integer("wavenumber", 1));
    s.amplitude = r.number("amplitude", 1.0);
  } else {
    reject("u0.id", "unknown initial datum '" + s.id + "' (bump, double_bump, step, sinusoid)");
  }
  r.finish();
  return s;
}

std::vector<int> default_levels(int K) {
  std::vector<int> levels;
  for (int n = 4; n <= K; n *= 2) {
    if (K % n == 0) levels.push_back(n);
  }
  if (levels.empty() || levels.back() != K) levels.push_back(K);
  return levels;
}

void check_support_margin(const ExperimentConfig& cfg) {
  const AnalyticField u0 = build_initial(cfg);
  if (!u0.support) return;
  const double limit = 0.9 * cfg.L;
  for (int a = 0; a < cfg.d; ++a) {
    if (u0.support->lo[a] < -limit || u0.support->hi[a] > limit) {
      reject("u0", "support " + u0.support->describe() + " comes closer than 10% of L to the box boundary");
    }
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigurationError(std::string("config is not valid JSON: ") + e.what());
  }
  ObjectReader r(doc, "");
  ExperimentConfig cfg;

  const long long d = r.integer("d");
  if (d < 1 || d > kMaxDim) reject("d", "must be 1, 2 or 3");
  cfg.d = static_cast<int>(d);
  cfg.L = r.number("L");
  if (!(cfg.L > 0.0)) reject("L", "must be positive");
  const long long N = r.integer("N");
  if (N < 8 || N > (1 << 20)) reject("N", "must be between 8 and 2^20");
  cfg.N = static_cast<int>(N);
  cfg.T = r.number("T");
  if (!(cfg.T > 0.0)) reject("T", "must be positive");
  cfg.dt = r.number("dt");
  if (!(cfg.dt > 0.0)) reject("dt", "must be positive");
  int K = 0;
  try {
    K = step_count(cfg.T, cfg.dt);
  } catch (const ConfigurationError& e) {
    reject("dt", e.what());
  }
  if (r.has("scheme")) {
    const std::string s = r.text("scheme");
    try {
      cfg.scheme = scheme_from_string(s);
    } catch (const ConfigurationError&) {
      reject("scheme", "unknown scheme '" + s + "' (semi_lagrangian, upwind_fv)");
    }
  }
  cfg.p = r.number("p", 2.0);
  if (!(cfg.p >= 1.0)) reject("p", "must be >= 1");
  if (r.has("seed")) {
    const json& s = r.raw("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      reject("seed", "expected a non-negative integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }
  cfg.drift = read_drift(r.raw("drift"), cfg.d);
  cfg.u0 = read_initial(r.raw("u0"), cfg.d);
  const long long phi = r.integer("phi_count", 10);
  if (phi < 1) reject("phi_count", "must be at least 1");
  cfg.phi_count = static_cast<int>(phi);

  if (r.has("wz_levels")) {
    const json& levels = r.raw("wz_levels");
    if (!levels.is_array() || levels.empty()) reject("wz_levels", "expected a non-empty array of integers");
    for (const auto& v : levels) {
      if (!v.is_number_integer() || v.get<long long>() < 1) reject("wz_levels", "expected positive integers");
      const int n = static_cast<int>(v.get<long long>());
      if (K % n != 0) {
        reject("wz_levels", "level " + std::to_string(n) + " does not divide the step count " + std::to_string(K));
      }
      if (!cfg.wz_levels.empty() && n <= cfg.wz_levels.back()) reject("wz_levels", "levels must increase");
      cfg.wz_levels.push_back(n);
    }
  } else {
    cfg.wz_levels = default_levels(K);
  }

  if (r.has("mollify_eps")) {
    const json& m = r.raw("mollify_eps");
    if (m.is_string()) {
      if (m.get<std::string>() != "auto") reject("mollify_eps", "expected a number or \"auto\"");
      cfg.mollify = MollifyPolicy::automatic;
    } else if (m.is_number()) {
      cfg.mollify_eps = m.get<double>();
      if (!(cfg.mollify_eps >= 0.0)) reject("mollify_eps", "must be >= 0");
      cfg.mollify = cfg.mollify_eps > 0.0 ? MollifyPolicy::fixed : MollifyPolicy::none;
    } else {
      reject("mollify_eps", "expected a number or \"auto\"");
    }
  }
  cfg.out_dir = r.has("out_dir") ? r.text("out_dir") : "out";
  r.finish();

  try {
    (void)build_drift(cfg);
  } catch (const ConfigurationError& e) {
    reject("drift", e.what());
  }
  try {
    check_support_margin(cfg);
  } catch (const ConfigurationError& e) {
    if (std::string(e.what()).rfind("config key", 0) == 0) throw;
    reject("u0", e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::string text;
  try {
    text = csv::read_file(file);
  } catch (const Error& e) {
    throw ConfigurationError("cannot read config '" + file.string() + "': " + e.what());
  }
  return parse_config(text);
}

std::string to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["d"] = cfg.d;
  doc["L"] = cfg.L;
  doc["N"] = cfg.N;
  doc["T"] = cfg.T;
  doc["dt"] = cfg.dt;
  doc["scheme"] = to_string(cfg.scheme);
  doc["p"] = cfg.p;
  doc["seed"] = cfg.seed;

  json drift;
  drift["id"] = cfg.drift.id;
  if (cfg.drift.id == "constant") drift["c"] = vec_json(cfg.drift.c, cfg.d);
  if (cfg.drift.id == "linear") {
    if (cfg.drift.matrix) {
      json m = json::array();
      for (int i = 0; i < cfg.d; ++i) m.push_back(vec_json((*cfg.drift.matrix)[i], cfg.d));
      drift["matrix"] = m;
    } else {
      drift["scale"] = cfg.drift.scale.value_or(0.0);
    }
  }
  if (cfg.drift.id == "stream" || cfg.drift.id == "shear") drift["amplitude"] = cfg.drift.amplitude;
  if (cfg.drift.id == "power1d") drift["alpha"] = cfg.drift.alpha;
  if (cfg.drift.modulation) {
    drift["modulation"] = {{"amplitude", cfg.drift.modulation->amplitude}, {"omega", cfg.drift.modulation->omega}};
  }
  doc["drift"] = drift;

  json u0;
  const InitialSpec& s = cfg.u0;
  u0["id"] = s.id;
  if (s.id == "bump" || s.id == "double_bump") {
    u0["center"] = vec_json(s.center, cfg.d);
    u0["radius"] = s.radius;
    u0["amplitude"] = s.amplitude;
  }
  if (s.id == "double_bump") {
    u0["center2"] = vec_json(s.center2, cfg.d);
    u0["amplitude2"] = s.amplitude2;
  }
  if (s.id == "step") {
    u0["lo"] = s.lo;
    u0["hi"] = s.hi;
    u0["amplitude"] = s.amplitude;
  }
  if (s.id == "sinusoid") {
    u0["wavenumber"] = s.wavenumber;
    u0["amplitude"] = s.amplitude;
  }
  doc["u0"] = u0;

  doc["phi_count"] = cfg.phi_count;
  doc["wz_levels"] = cfg.wz_levels;
  switch (cfg.mollify) {
    case MollifyPolicy::none: doc["mollify_eps"] = 0.0; break;
    case MollifyPolicy::fixed: doc["mollify_eps"] = cfg.mollify_eps; break;
    case MollifyPolicy::automatic: doc["mollify_eps"] = "auto"; break;
  }
  doc["out_dir"] = cfg.out_dir;
  return doc.dump(2) + "\n";
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

DriftField build_drift(const ExperimentConfig& cfg) {
  const DriftSpec& s = cfg.drift;
  DriftField b;
  if (s.id == "zero") {
    b = make_constant_drift(cfg.d, Vec{});
    b.id = "zero";
  } else if (s.id == "constant") {
    b = make_constant_drift(cfg.d, s.c);
  } else if (s.id == "linear") {
    b = s.matrix ? make_linear_drift(cfg.d, *s.matrix) : make_linear_drift(cfg.d, s.scale.value_or(0.0));
  } else if (s.id == "stream") {
    b = make_stream_drift(cfg.L, s.amplitude);
  } else if (s.id == "shear") {
    b = make_shear_drift(cfg.L, s.amplitude);
  } else if (s.id == "power1d") {
    b = make_power_drift(s.alpha, cfg.L);
  } else {
    reject("drift.id", "unknown drift '" + s.id + "'");
  }
  if (s.modulation) b = make_time_modulated(b, s.modulation->amplitude, s.modulation->omega);
  return b;
}

AnalyticField build_initial(const ExperimentConfig& cfg) {
  const InitialSpec& s = cfg.u0;
  if (s.id == "bump") return make_bump(cfg.d, s.center, s.radius, s.amplitude);
  if (s.id == "double_bump") return make_double_bump(cfg.d, s.center, s.center2, s.radius, s.amplitude, s.amplitude2);
  if (s.id == "step") return make_step(cfg.d, s.lo, s.hi, s.amplitude);
  if (s.id == "sinusoid") return make_sinusoid(cfg.d, cfg.L, s.wavenumber, s.amplitude);
  reject("u0.id", "unknown initial datum '" + s.id + "'");
}

double mollify_radius(const ExperimentConfig& cfg, const DriftField& b, const SpatialGrid& grid) {
  switch (cfg.mollify) {
    case MollifyPolicy::none: return 0.0;
    case MollifyPolicy::fixed: return cfg.mollify_eps;
    case MollifyPolicy::automatic: return b.is_smooth() ? 0.0 : 2.0 * grid.spacing();
  }
  return 0.0;
}

void check_cfl(const ExperimentConfig& cfg, const DriftField& b, const SamplePath& B, const SpatialGrid& grid) {
  if (cfg.scheme != Scheme::upwind_fv) return;
  const double cfl = max_cfl_number(b, B, grid, cfg.dt, cfg.T);
  if (cfl > kMaxCfl * (1.0 + 1e-12)) {
    reject("dt", "Courant number " + csv::number(cfl) + " exceeds " + csv::number(kMaxCfl) + " for the upwind scheme at N = " +
                     std::to_string(grid.points_per_axis()));
  }
}

}  // namespace pathwise
