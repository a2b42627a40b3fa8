#include "analytic.hpp"

#include <cmath>
#include <numbers>

namespace ghostsim::analytic {

namespace {
constexpr double kPi = std::numbers::pi;
}

double gaussian_source_norm_constant(double a, double b) {
  // |phi|^2 = C^2 exp(-v^T Q v), det Q = 4/a^4 + 8/(a^2 b^2).
  const double det = 4.0 / (a * a * a * a) + 8.0 / (a * a * b * b);
  return 1.0 / std::sqrt(kPi / std::sqrt(det));
}

double double_slit_fourier_energy(double w, double lambda, double f) {
  const double lf = lambda * f;
  return 2.0 * w / (lf * lf);
}

double rect_two_f_energy(double D, double lambda, double f) {
  const double lf = lambda * f;
  return D / (8.0 * lf * lf * lf);
}

Complex all_gaussian_amplitude(const AllGaussianToy& t, double x_t, double x_r) {
  const double lf = t.lambda_mm * t.f_mm;
  const double s2 = std::pow(kPi * t.pupil_sigma_mm / (2.0 * lf), 2);
  const double inv_a2 = 1.0 / (t.a_mm * t.a_mm), inv_b2 = 1.0 / (t.b_mm * t.b_mm);
  const Complex I(0.0, 1.0);

  // exponent = -A x^2 - B x'^2 + 2 G x x' + p x + q x' + r
  const Complex A = inv_a2 + inv_b2 + 1.0 / (t.object_w_mm * t.object_w_mm);
  const Complex B = inv_a2 + inv_b2 + s2 - I * kPi / (2.0 * lf);
  const double G = inv_b2;
  const Complex p = -2.0 * kPi * I * x_t / lf;
  const Complex q = -2.0 * s2 * x_r;
  const Complex r = -s2 * x_r * x_r + I * kPi * x_r * x_r / (2.0 * lf);

  // x' first, then x.
  const Complex A2 = A - G * G / B;
  const Complex p2 = p + G * q / B;
  const Complex r2 = r + q * q / (4.0 * B);
  const Complex integral = std::sqrt(kPi / B) * std::sqrt(kPi / A2) * std::exp(r2 + p2 * p2 / (4.0 * A2));

  const Complex prefactor = t.c_norm * (-I / lf) * t.pupil_sigma_mm * std::sqrt(kPi) / (4.0 * lf * lf);
  return prefactor * integral;
}

}  // namespace ghostsim::analytic
