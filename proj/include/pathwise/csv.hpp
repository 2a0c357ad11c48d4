#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pathwise::csv {

/// Shortest decimal text that round-trips to the same double.
std::string number(double v);

/// Writes a whole file at once; throws Error when the file cannot be opened.
void write_file(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

std::vector<std::string> split(std::string_view line, char sep = ',');
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

}  // namespace pathwise::csv
