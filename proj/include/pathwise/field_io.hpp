#pragma once

#include "pathwise/field.hpp"

#include <filesystem>
#include <string>

namespace pathwise {

/// Snapshot text: a `# grid d=<d> L=<L> N=<N>` line, a column header
/// `index,x1[,x2],value`, then one row per node in row-major order.
std::string field_to_csv(const ScalarField& f);
ScalarField field_from_csv(const std::string& text);

void write_field(const std::filesystem::path& path, const ScalarField& f);
ScalarField read_field(const std::filesystem::path& path);

}  // namespace pathwise
