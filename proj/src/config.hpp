#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "experiments.hpp"
#include "json.hpp"

namespace ghostsim {

enum class OutputFormat { Csv, Json };

/// Run configuration as written in the JSON file. Wavelengths stay in nm
/// here and are converted to mm by to_scan_config().
struct RunConfig {
  SourceSpec source;

  struct TestArm {
    double lambda_nm = 0.0;
    double f_mm = 0.0;
    ObjectSpec object;
    friend bool operator==(const TestArm&, const TestArm&) = default;
  } test_arm;

  struct ReferenceArm {
    double lambda_nm = 0.0;
    double f_mm = 0.0;
    PupilSpec pupil;
    QuadraticPhase quadratic_phase = QuadraticPhase::SourceCoordinate;
    friend bool operator==(const ReferenceArm&, const ReferenceArm&) = default;
  } reference_arm;

  struct Scan {
    double xr_min_mm = kDefaultScanMin;
    double xr_max_mm = kDefaultScanMax;
    std::int64_t n_points = kDefaultScanPoints;
    double xt_mm = 0.0;
    friend bool operator==(const Scan&, const Scan&) = default;
  } scan;

  std::int64_t n_pairs = 1;

  struct Numerics {
    std::int64_t n_x = kDefaultNx;
    std::int64_t n_xp = kDefaultNxp;
    double window_mm = 0.0;  // resolved; 4 a_mm when absent from the file
    friend bool operator==(const Numerics&, const Numerics&) = default;
  } numerics;

  struct Output {
    std::string path;
    OutputFormat format = OutputFormat::Csv;
    friend bool operator==(const Output&, const Output&) = default;
  } output;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  ScanConfig to_scan_config(unsigned threads = 0) const;
};

inline constexpr double kNmPerMm = 1e6;

/// Parse errors (ErrorCode::Parse) report line and column; validation
/// errors (ErrorCode::Config) name the offending field. Unknown keys are
/// rejected. Relative tabulated paths resolve against base_dir.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved configuration, defaults included.
nlohmann::json to_json(const RunConfig& config);

/// Sweepable parameter names.
inline constexpr std::string_view kApertureParam = "reference_arm.pupil.rect.D_mm";

}  // namespace ghostsim
