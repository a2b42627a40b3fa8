#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include "experiments.hpp"
#include "json.hpp"

namespace ghostsim {

inline constexpr const char* kScanCsvHeader = "x_r_mm,g2,g2_norm,dg2,dg2_norm,dg2_avg_norm,snr,snr_avg,flags";

/// 17 significant digits; "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double v);

void write_scan_csv(const CorrelationResult& result, std::ostream& out);

/// Records plus the columns of the CSV form; non-finite numbers become null.
nlohmann::json scan_to_json(const CorrelationResult& result, const nlohmann::json& provenance);

/// Array of {aperture_mm, peak_snr, peak_positions_mm, contrast, noise_amplitude}.
nlohmann::json sweep_to_json(std::span<const SweepSummary> sweep);

/// Writes to a sibling temporary file and renames it over `path`, so a
/// failed run never leaves partial output.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace ghostsim
