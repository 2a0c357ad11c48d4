#include "pathwise/convergence.hpp"

#include "pathwise/csv.hpp"
#include "pathwise/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pathwise {

std::vector<OrderEstimate> estimate_order(const std::vector<double>& errors) {
  std::size_t positive = 0;
  bool hit_zero = false;
  for (double e : errors) {
    if (!(e >= 0.0)) throw ConfigurationError("error ladder contains a negative or NaN entry");
    if (e == 0.0) {
      hit_zero = true;
    } else if (hit_zero) {
      throw ConfigurationError("error ladder has a positive entry after an exact zero");
    } else {
      ++positive;
    }
  }
  if (positive < 2) throw ConfigurationError("order estimation needs at least two positive errors");

  std::vector<OrderEstimate> out;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (errors[i] == 0.0) {
      out.push_back({0.0, true});
      break;
    }
    out.push_back({std::log2(errors[i - 1] / errors[i]), false});
  }
  return out;
}

ConvergenceTable ConvergenceTable::build(std::string label, const std::vector<double>& levels,
                                         const std::vector<double>& errors) {
  if (levels.size() != errors.size()) throw ConfigurationError("levels and errors differ in length");
  ConvergenceTable t;
  t.label = std::move(label);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    ConvergenceRow row{levels[i], errors[i], std::nullopt};
    if (i > 0 && errors[i - 1] > 0.0) {
      if (errors[i] > 0.0) row.order = OrderEstimate{std::log2(errors[i - 1] / errors[i]), false};
      else if (errors[i] == 0.0) row.order = OrderEstimate{0.0, true};
    }
    t.rows.push_back(row);
  }
  return t;
}

std::vector<double> ConvergenceTable::errors() const {
  std::vector<double> e;
  for (const auto& r : rows) e.push_back(r.error);
  return e;
}

bool ConvergenceTable::non_increasing_tail(std::size_t count) const {
  const std::size_t n = rows.size();
  const std::size_t start = n > count ? n - count : 0;
  for (std::size_t i = start + 1; i < n; ++i) {
    if (rows[i].error > rows[i - 1].error) return false;
  }
  return true;
}

bool ConvergenceTable::decreasing_tail(std::size_t count) const {
  const std::size_t n = rows.size();
  const std::size_t start = n > count ? n - count : 0;
  for (std::size_t i = start + 1; i < n; ++i) {
    if (!(rows[i].error < rows[i - 1].error)) return false;
  }
  return true;
}

std::string ConvergenceTable::to_csv() const {
  std::string out = "level,error,order\n";
  for (const auto& r : rows) {
    out += csv::number(r.level) + "," + csv::number(r.error) + ",";
    if (r.order) out += r.order->exact ? "exact" : csv::number(r.order->value);
    out += "\n";
  }
  return out;
}

}  // namespace pathwise
