#pragma once

#include <cstdint>
#include <vector>

#include "numgrid.hpp"
#include "optics.hpp"
#include "source.hpp"

namespace ghostsim {

/// (phi, h_t, h_r) plus the source-plane grids: gx for the test-side
/// coordinate x, gxp for the reference-side coordinate x'.
struct CorrelatorSetup {
  TwoPhotonState state;
  ImpulseResponse test_arm;
  ImpulseResponse reference_arm;
  Grid1D gx;
  Grid1D gxp;
};

struct PointStatistics {
  double x_t = 0.0;
  double x_r = 0.0;
  Complex amplitude = 0.0;
  double g2 = 0.0;             // |amplitude|^2
  double i_t = 0.0;            // int |h_t(x_t, x)|^2 dx
  double i_r = 0.0;            // int |h_r(x_r, x')|^2 dx'
  double second_moment = 0.0;  // g2 * i_t * i_r
  double noise = 0.0;          // sqrt(second_moment - g2^2)
  double snr = 0.0;            // g2 / noise; 0 if g2 == 0, +inf if noise == 0
  bool g2_zero = false;
  bool noise_clamped = false;
};

struct ArmEnergy {
  double value = 0.0;
  /// Largest boundary sample of |h|^2 relative to the largest sample.
  double edge_ratio = 0.0;
  /// edge_ratio above kArmSupportTolerance.
  bool support_warning = false;
};

inline constexpr double kArmSupportTolerance = 1e-6;
inline constexpr double kNoiseClampWindow = 1e-12;

/// int |h(x_out, x)|^2 dx over g, using the arm's input weights.
ArmEnergy arm_energy(const ImpulseResponse& h, double x_out, const Grid1D& g);

double second_moment_from(double g2, double i_t, double i_r) noexcept;

struct Noise {
  double value = 0.0;
  bool clamped = false;
};

/// sqrt(second_moment - g2^2). A negative radicand within
/// kNoiseClampWindow * (second_moment + g2^2) clamps to zero; anything more
/// negative throws NormalizationViolation.
Noise noise_from(double g2, double second_moment);

double snr_from(double g2, double noise) noexcept;

/// noise / sqrt(N) for N independent pairs. Throws unless n_pairs >= 1.
double averaged_noise(double noise, std::int64_t n_pairs);
/// snr * sqrt(N).
double averaged_snr(double snr, std::int64_t n_pairs);

/// Evaluates coincidence statistics for one setup. Construction validates
/// the setup and precomputes quadrature weights and, when it fits in
/// cache_limit_bytes, the source amplitude on the active nodes. All
/// evaluation methods are const and safe to call concurrently.
class Correlator {
 public:
  explicit Correlator(CorrelatorSetup setup, std::size_t cache_limit_bytes = std::size_t{256} << 20);

  const CorrelatorSetup& setup() const noexcept { return setup_; }

  /// Separable route: inner x' sums per x node, then the x sum.
  Complex amplitude(double x_t, double x_r) const;
  /// Full tensor-product sum via integrate2d_weighted.
  Complex amplitude_direct(double x_t, double x_r) const;

  double coincidence_rate(double x_t, double x_r) const;
  double test_arm_energy(double x_t) const;
  double reference_arm_energy(double x_r) const;
  double second_moment(double x_t, double x_r) const;
  double noise(double x_t, double x_r) const;
  double snr(double x_t, double x_r) const;

  PointStatistics evaluate(double x_t, double x_r) const;
  /// As evaluate(), with arm energies supplied by the caller.
  PointStatistics evaluate(double x_t, double x_r, double i_t, double i_r) const;

  bool source_cached() const noexcept { return !phi_cache_.empty(); }

 private:
  Complex source_at(std::size_t row, std::size_t col) const;

  CorrelatorSetup setup_;
  std::vector<double> wx_;   // test-arm weights, power 1
  std::vector<double> wxp_;  // reference-arm weights, power 1
  std::vector<std::size_t> rows_;  // x nodes with nonzero weight
  std::vector<std::size_t> cols_;  // x' nodes with nonzero weight
  std::vector<Complex> test_phase_;  // exp(i k x^2) per active row
  std::vector<Complex> phi_cache_;   // rows_ x cols_
};

}  // namespace ghostsim
