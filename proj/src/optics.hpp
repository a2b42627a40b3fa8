#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "numgrid.hpp"

namespace ghostsim {

/// sin(pi x)/(pi x), exactly zero at nonzero integers, 1 at 0.
double sinc_pi(double x) noexcept;

// ---------------------------------------------------------------------------
// Object transmission t(x), real in [0, 1].

enum class TransmissionKind { DoubleSlit, Gaussian, Tabulated };

class Transmission {
 public:
  double operator()(double x) const;
  TransmissionKind kind() const noexcept { return kind_; }

  double slit_width() const noexcept { return w_; }
  double slit_distance() const noexcept { return d_; }
  double gaussian_width() const noexcept { return w_; }

  /// Piecewise-linear form (double slit, tabulated); empty for smooth kinds.
  const PiecewiseLinear& piecewise() const noexcept { return pl_; }

  /// Node weights for integrals of t(x)^power * g(x) with smooth g.
  /// Piecewise forms use the product Simpson rule so slit edges are
  /// integrated exactly; smooth forms use trapezoid weights times t^power.
  std::vector<double> quadrature_weights(const Grid1D& grid, int power) const;

 private:
  friend Transmission double_slit(double, double);
  friend Transmission gaussian_transmission(double);
  friend Transmission tabulated_transmission(PiecewiseLinear);

  TransmissionKind kind_ = TransmissionKind::DoubleSlit;
  double w_ = 0.0;
  double d_ = 0.0;
  PiecewiseLinear pl_;
};

/// Two slits of width w centered at +-d/2 (d is center-to-center).
/// Requires 0 < w < d.
Transmission double_slit(double w_mm, double d_mm);
/// t(x) = exp(-x^2/w^2).
Transmission gaussian_transmission(double w_mm);
/// Values must lie in [0, 1]; zero outside the table.
Transmission tabulated_transmission(PiecewiseLinear table);
/// CSV columns x_mm, value.
Transmission load_transmission_csv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Pupil p(x) and its Fourier transform P(u) = int p(x) exp(-2 pi i u x) dx.

enum class PupilKind { Rect, Gaussian, Tabulated };

class Pupil {
 public:
  Complex operator()(double x) const;
  /// Analytic for rect and Gaussian pupils; tabulated pupils integrate the
  /// piecewise-linear interpolant exactly against the Fourier kernel.
  Complex ft(double u) const;

  PupilKind kind() const noexcept { return kind_; }
  double size() const noexcept { return size_; }  // D for rect, sigma for Gaussian

 private:
  friend Pupil rect_pupil(double);
  friend Pupil gaussian_pupil(double);
  friend Pupil tabulated_pupil(PiecewiseLinear, PiecewiseLinear);

  PupilKind kind_ = PupilKind::Rect;
  double size_ = 0.0;
  PiecewiseLinear re_, im_;
};

/// p(x) = 1 for |x| <= D/2, else 0. Requires D > 0.
Pupil rect_pupil(double D_mm);
/// p(x) = exp(-x^2/sigma^2). Requires sigma > 0.
Pupil gaussian_pupil(double sigma_mm);
/// Real and imaginary parts share their abscissae.
Pupil tabulated_pupil(PiecewiseLinear re, PiecewiseLinear im);
/// CSV columns x_mm, value or x_mm, re, im.
Pupil load_pupil_csv(const std::filesystem::path& path);

Complex pupil_ft(const Pupil& p, double u);

// ---------------------------------------------------------------------------
// Impulse responses h(x_out, x_in) of one optical arm.

enum class ArmKind { FourierArm, TwoFArm, Tabulated };

/// Which coordinate carries the second quadratic phase term of the 2f-2f
/// reference arm. SourceCoordinate uses the arm's own input x'.
/// TestCoordinate reproduces the literal printed form, where the phase
/// rides on the test-side source coordinate x; the correlator applies it.
enum class QuadraticPhase { SourceCoordinate, TestCoordinate };

class ImpulseResponse {
 public:
  /// Full kernel value, no finiteness check (see eval_h).
  Complex operator()(double x_out, double x_in) const;

  /// Kernel divided by the input-plane modulation: h = m(x_in) * carrier.
  /// Arms without a modulation return the full kernel.
  Complex carrier(double x_out, double x_in) const;

  /// Node weights on the input coordinate for integrals of
  /// |m|^power * (smooth). Unmodulated arms use trapezoid weights.
  std::vector<double> input_weights(const Grid1D& grid, int power) const;

  ArmKind kind() const noexcept { return kind_; }
  double wavelength() const noexcept { return lambda_; }
  double focal_length() const noexcept { return f_; }
  const Transmission* transmission() const noexcept { return object_ ? &*object_ : nullptr; }
  const Pupil* pupil() const noexcept { return pupil_ ? &*pupil_ : nullptr; }
  QuadraticPhase quadratic_phase() const noexcept { return phase_; }

  /// Coefficient k of an extra factor exp(i k x^2) on the test-side source
  /// coordinate; nonzero only for a TestCoordinate 2f arm.
  double test_coordinate_phase_rate() const noexcept;

  /// Same arm with its kernel multiplied by c.
  ImpulseResponse scaled(Complex c) const;
  Complex gain() const noexcept { return gain_; }

 private:
  friend ImpulseResponse fourier_arm(double, double, Transmission);
  friend ImpulseResponse two_f_arm(double, double, Pupil, QuadraticPhase);
  friend ImpulseResponse tabulated_arm(const Grid1D&, const Grid1D&, std::vector<Complex>);

  struct Table {
    Grid1D g_out;
    Grid1D g_in;
    std::vector<Complex> values;  // row-major: x_out outer
  };

  ArmKind kind_ = ArmKind::FourierArm;
  double lambda_ = 0.0;
  double f_ = 0.0;
  Complex gain_ = 1.0;
  QuadraticPhase phase_ = QuadraticPhase::SourceCoordinate;
  std::optional<Transmission> object_;
  std::optional<Pupil> pupil_;
  std::shared_ptr<const Table> table_;
};

/// h_t(x_t, x) = -(i/(lambda f)) t(x) exp(-2 pi i x_t x/(lambda f)).
/// The lens is taken as unapertured.
ImpulseResponse fourier_arm(double lambda_mm, double f_mm, Transmission t);

/// h_r(x_r, x') = P((x_r + x')/(2 lambda f)) / (4 lambda^2 f^2)
///                * exp(i pi (x_r^2 + x'^2)/(2 lambda f)).
ImpulseResponse two_f_arm(double lambda_mm, double f_mm, Pupil p,
                          QuadraticPhase phase = QuadraticPhase::SourceCoordinate);

/// Bilinear interpolation on g_out x g_in, zero outside.
ImpulseResponse tabulated_arm(const Grid1D& g_out, const Grid1D& g_in, std::vector<Complex> values);

/// Kernel value; NumericDomainError if it is not finite.
Complex eval_h(const ImpulseResponse& h, double x_out, double x_in);

}  // namespace ghostsim
