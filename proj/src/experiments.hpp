#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "correlator.hpp"

namespace ghostsim {

struct SourceSpec {
  double a_mm = 0.0;
  double b_mm = 0.0;
  friend bool operator==(const SourceSpec&, const SourceSpec&) = default;
};

struct DoubleSlitSpec {
  double w_mm = 0.0;
  double d_mm = 0.0;
  friend bool operator==(const DoubleSlitSpec&, const DoubleSlitSpec&) = default;
};
struct GaussianObjectSpec {
  double w_mm = 0.0;
  friend bool operator==(const GaussianObjectSpec&, const GaussianObjectSpec&) = default;
};
struct RectPupilSpec {
  double D_mm = 0.0;
  friend bool operator==(const RectPupilSpec&, const RectPupilSpec&) = default;
};
struct GaussianPupilSpec {
  double sigma_mm = 0.0;
  friend bool operator==(const GaussianPupilSpec&, const GaussianPupilSpec&) = default;
};
struct TabulatedSpec {
  std::filesystem::path path;
  friend bool operator==(const TabulatedSpec&, const TabulatedSpec&) = default;
};

using ObjectSpec = std::variant<DoubleSlitSpec, GaussianObjectSpec, TabulatedSpec>;
using PupilSpec = std::variant<RectPupilSpec, GaussianPupilSpec, TabulatedSpec>;

struct TestArmSpec {
  double lambda_mm = 0.0;
  double f_mm = 0.0;
  ObjectSpec object;
};

struct ReferenceArmSpec {
  double lambda_mm = 0.0;
  double f_mm = 0.0;
  PupilSpec pupil;
  QuadraticPhase phase = QuadraticPhase::SourceCoordinate;
};

inline constexpr std::int64_t kDefaultNx = 16385;
inline constexpr std::int64_t kDefaultNxp = 4097;
inline constexpr double kDefaultWindowPerSourceSize = 4.0;
inline constexpr double kDefaultScanMin = -2.0;
inline constexpr double kDefaultScanMax = 2.0;
inline constexpr std::int64_t kDefaultScanPoints = 201;
inline constexpr double kPeakThreshold = 0.2;
inline constexpr std::size_t kPeakSeparation = 3;

struct GridSpec {
  std::int64_t n_x = kDefaultNx;
  std::int64_t n_xp = kDefaultNxp;
  /// Half-width of both source-plane grids; defaults to 4a.
  std::optional<double> window_mm;
};

struct ScanRange {
  double min_mm = kDefaultScanMin;
  double max_mm = kDefaultScanMax;
  std::int64_t n_points = kDefaultScanPoints;
};

struct ScanConfig {
  SourceSpec source;
  TestArmSpec test_arm;
  ReferenceArmSpec reference_arm;
  double x_t_fixed = 0.0;
  ScanRange x_r;
  std::int64_t n_pairs = 1;
  GridSpec grids;
  /// 0 selects the hardware concurrency. GHOSTSIM_THREADS caps either way.
  unsigned threads = 0;
};

/// Throws InvalidArgument naming the offending field.
void validate(const ScanConfig& config);

double resolved_window(const ScanConfig& config);
Transmission build_object(const ObjectSpec& spec);
Pupil build_pupil(const PupilSpec& spec);
/// Normalized source on the default certification grids of `config`.
TwoPhotonState build_state(const ScanConfig& config);
CorrelatorSetup build_setup(const ScanConfig& config, const TwoPhotonState& normalized_state);
CorrelatorSetup build_setup(const ScanConfig& config);

/// Effective worker count: requested (or hardware concurrency when 0),
/// capped by GHOSTSIM_THREADS. Throws Config on a malformed variable.
unsigned resolve_threads(unsigned requested);

struct CorrelationResult {
  std::vector<PointStatistics> records;  // ascending x_r
  double g2_max = 0.0;
  std::int64_t n_pairs = 1;
  ScanConfig config;

  double g2_norm(std::size_t i) const;
  double dg2_norm(std::size_t i) const;
  double dg2_avg_norm(std::size_t i) const;
  double snr_avg(std::size_t i) const;
  /// '|'-separated: g2_zero, snr_inf, noise_clamped. Empty if none.
  std::string flags(std::size_t i) const;
  /// Index of the largest g2; ties go to the smaller |x_r|.
  std::size_t peak_index() const;
};

std::vector<double> scan_positions(const ScanRange& range);

CorrelationResult scan_reference(const ScanConfig& config);
/// Scan with an already-built correlator (config supplies the scan range,
/// x_t, pair count and thread count).
CorrelationResult scan_reference(const Correlator& correlator, const ScanConfig& config);

/// Local maxima above kPeakThreshold * g2_max, at least kPeakSeparation
/// points apart, in decreasing g2 order (ties toward smaller |x_r|).
std::vector<std::size_t> find_peaks(const CorrelationResult& result);

/// (peak - valley)/(peak + valley) from the two strongest peaks and the
/// sample nearest their midpoint. Throws UndefinedContrast with fewer than
/// two peaks.
double contrast_metric(const CorrelationResult& result);

struct SweepSummary {
  double aperture_mm = 0.0;
  double peak_snr = 0.0;  // N-averaged SNR at the g2 maximum
  std::vector<double> peak_positions_mm;
  std::optional<double> contrast;  // empty when undefined
  double noise_amplitude = 0.0;    // max of the normalized averaged noise
};

SweepSummary summarize(const CorrelationResult& result, double aperture_mm);

/// One scan per aperture with only the rect pupil size changed. The base
/// config must use a rect pupil.
std::vector<SweepSummary> aperture_sweep(const ScanConfig& base, std::span<const double> apertures);

/// Checks that contrast does not increase as the aperture shrinks.
/// Returns human-readable descriptions of violations (empty if monotone).
std::vector<std::string> contrast_monotonicity_violations(std::span<const SweepSummary> sweep);

}  // namespace ghostsim
