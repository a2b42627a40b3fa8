#pragma once

#include "numgrid.hpp"

// Closed-form reference values. Nothing on the simulation path calls
// these; they exist for the built-in validation suite.
namespace ghostsim::analytic {

/// C such that int int |C exp(-(x^2+x'^2)/a^2) exp(-(x-x')^2/b^2)|^2 = 1.
double gaussian_source_norm_constant(double a_mm, double b_mm);

/// int |h_t(x_t, x)|^2 dx for a double slit of width w: 2w/(lambda f)^2.
double double_slit_fourier_energy(double w_mm, double lambda_mm, double f_mm);

/// int |h_r(x_r, x')|^2 dx' for a rect pupil of size D: D/(8 lambda^3 f^3).
double rect_two_f_energy(double D_mm, double lambda_mm, double f_mm);

/// Gaussian source, Gaussian object exp(-x^2/w^2) in a Fourier arm and a
/// Gaussian pupil exp(-x^2/sigma^2) in a 2f-2f arm (source-coordinate phase).
struct AllGaussianToy {
  double a_mm;
  double b_mm;
  double c_norm;
  double object_w_mm;
  double pupil_sigma_mm;
  double lambda_mm;
  double f_mm;
};

/// Amplitude by iterated one-dimensional complex Gaussian integrals.
Complex all_gaussian_amplitude(const AllGaussianToy& toy, double x_t, double x_r);

}  // namespace ghostsim::analytic
