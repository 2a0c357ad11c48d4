#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pathwise {

/// Pairwise order log2(e_prev / e_cur); `exact` marks a ladder that hit zero.
struct OrderEstimate {
  double value = 0.0;
  bool exact = false;
};

/// Needs at least two positive leading entries. A zero entry ends the
/// ladder: its order is reported as exact and any later entry must be zero
/// too. Negative entries, or a positive entry after a zero, are errors.
std::vector<OrderEstimate> estimate_order(const std::vector<double>& errors);

struct ConvergenceRow {
  double level = 0.0;
  double error = 0.0;
  /// Empty on the first row and wherever the ratio is undefined.
  std::optional<OrderEstimate> order;
};

/// Refinement table (one row per level). Orders are filled leniently: rows
/// whose neighbours make the ratio undefined get no order.
struct ConvergenceTable {
  std::string label;
  std::vector<ConvergenceRow> rows;

  static ConvergenceTable build(std::string label, const std::vector<double>& levels,
                                const std::vector<double>& errors);

  std::vector<double> errors() const;
  /// True when errors never increase over the last `count` rows.
  bool non_increasing_tail(std::size_t count) const;
  /// True when errors strictly decrease over the last `count` rows.
  bool decreasing_tail(std::size_t count) const;

  /// `level,error,order` (order blank or `exact`).
  std::string to_csv() const;
};

}  // namespace pathwise
