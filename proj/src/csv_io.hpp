#pragma once

#include <filesystem>
#include <vector>

namespace ghostsim {

/// Reads a comma-separated numeric table. An optional non-numeric first
/// line is treated as a header; blank lines and lines starting with '#' are
/// skipped. Every row must have one of the allowed column counts, and all
/// rows the same count.
std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path,
                                                  std::initializer_list<std::size_t> allowed_columns);

}  // namespace ghostsim
