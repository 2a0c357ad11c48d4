#include "pathwise/field_io.hpp"

#include "pathwise/csv.hpp"
#include "pathwise/errors.hpp"

#include <sstream>

namespace pathwise {

std::string field_to_csv(const ScalarField& f) {
  const SpatialGrid& g = f.grid();
  std::string out = "# grid d=" + std::to_string(g.dimension()) + " L=" + csv::number(g.half_width()) +
                    " N=" + std::to_string(g.points_per_axis()) + "\nindex";
  for (int a = 0; a < g.dimension(); ++a) out += ",x" + std::to_string(a + 1);
  out += ",value\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec x = g.node(i);
    out += std::to_string(i);
    for (int a = 0; a < g.dimension(); ++a) out += "," + csv::number(x[a]);
    out += "," + csv::number(f[i]) + "\n";
  }
  return out;
}

ScalarField field_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("# grid", 0) != 0) {
    throw ConfigurationError("field CSV must start with '# grid d=<d> L=<L> N=<N>'");
  }
  int d = 0;
  int N = 0;
  double L = 0.0;
  {
    std::istringstream hs(line.substr(6));
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      if (key == "d") d = static_cast<int>(csv::parse_int(val));
      else if (key == "L") L = csv::parse_double(val);
      else if (key == "N") N = static_cast<int>(csv::parse_int(val));
    }
  }
  const SpatialGrid g(d, L, N);
  std::vector<double> values(g.size(), 0.0);
  std::vector<bool> seen(g.size(), false);
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("index", 0) == 0) continue;
    const auto cols = csv::split(line);
    if (cols.size() != static_cast<std::size_t>(d + 2)) {
      throw ConfigurationError("field CSV row has " + std::to_string(cols.size()) + " columns, expected " +
                               std::to_string(d + 2));
    }
    const auto idx = csv::parse_int(cols[0]);
    if (idx < 0 || static_cast<std::size_t>(idx) >= g.size()) {
      throw ConfigurationError("field CSV index out of range: " + cols[0]);
    }
    values[idx] = csv::parse_double(cols.back());
    seen[idx] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw ConfigurationError("field CSV is missing node " + std::to_string(i));
  }
  return ScalarField(g, std::move(values));
}

void write_field(const std::filesystem::path& path, const ScalarField& f) {
  csv::write_file(path, field_to_csv(f));
}

ScalarField read_field(const std::filesystem::path& path) { return field_from_csv(csv::read_file(path)); }

}  // namespace pathwise
