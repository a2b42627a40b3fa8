#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "numgrid.hpp"

namespace ghostsim {

/// phi(x, x') = c_norm * exp(-(x^2 + x'^2)/a^2) * exp(-(x - x')^2/b^2).
/// a sets the source size, b the entanglement width (both mm); c_norm in 1/mm.
struct GaussianSourceParams {
  double a_mm = 0.0;
  double b_mm = 0.0;
  double c_norm = 1.0;
};

enum class SourceKind { Gaussian, Tabulated };

/// Two-photon amplitude phi(x, x'), x on the test side and x' on the
/// reference side. Immutable; copies share the underlying table.
class TwoPhotonState {
 public:
  Complex operator()(double x, double xp) const;

  SourceKind kind() const noexcept { return kind_; }
  bool norm_certified() const noexcept { return certification_.has_value(); }

  /// Overall amplitude factor: c_norm for Gaussian states, the table scale
  /// for tabulated ones.
  double scale() const noexcept { return scale_; }

  /// Gaussian parameters with c_norm = scale(). Throws for tabulated states.
  GaussianSourceParams gaussian() const;

  struct Certification {
    Grid1D gx;
    Grid1D gxp;
  };
  const std::optional<Certification>& certification() const noexcept { return certification_; }

 private:
  friend TwoPhotonState gaussian_wavefunction(double, double);
  friend TwoPhotonState tabulated_wavefunction(const Grid1D&, const Grid1D&, std::vector<Complex>);
  friend TwoPhotonState normalize(const TwoPhotonState&, const Grid1D&, const Grid1D&);

  struct Table {
    Grid1D gx;
    Grid1D gxp;
    std::vector<Complex> values;  // row-major: x outer, x' inner
  };

  TwoPhotonState() = default;
  Complex unscaled(double x, double xp) const;

  SourceKind kind_ = SourceKind::Gaussian;
  double scale_ = 1.0;
  double a_ = 1.0, b_ = 1.0, inv_a2_ = 1.0, inv_b2_ = 1.0;
  std::shared_ptr<const Table> table_;
  std::optional<Certification> certification_;
};

/// Unnormalized Gaussian source (c_norm = 1). Throws InvalidArgument unless
/// a, b > 0.
TwoPhotonState gaussian_wavefunction(double a_mm, double b_mm);

/// Bilinear interpolation over the table, zero outside its domain.
/// values.size() must equal gx.size() * gxp.size().
TwoPhotonState tabulated_wavefunction(const Grid1D& gx, const Grid1D& gxp, std::vector<Complex> values);

/// Loads columns x_mm, xp_mm, re, im on a uniform cross-product,
/// row-major in x then x'.
TwoPhotonState load_wavefunction_csv(const std::filesystem::path& path);

/// Rescales so that the trapezoid quadrature of |phi|^2 over gx x gxp is 1.
/// Throws Truncation if boundary samples of |phi|^2 exceed 1e-8 of the peak
/// and InvalidArgument on a zero norm.
TwoPhotonState normalize(const TwoPhotonState& state, const Grid1D& gx, const Grid1D& gxp);

/// Quadrature of |phi|^2 over gx x gxp.
double norm_squared(const TwoPhotonState& state, const Grid1D& gx, const Grid1D& gxp);

/// x, x' in [-4a, 4a].
TwoPhotonState::Certification default_certification_grids(double a_mm, std::int64_t n_x, std::int64_t n_xp);

inline constexpr double kSupportTolerance = 1e-8;

namespace detail {
/// Test-only fault hook: normalize() multiplies the amplitude scale it
/// computes by this factor. 1.0 disables the fault.
void set_normalization_fault(double factor) noexcept;
double normalization_fault() noexcept;
}  // namespace detail

}  // namespace ghostsim
