#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace ghostsim {

using Complex = std::complex<double>;

/// Closed uniform lattice [center - half_width, center + half_width] with
/// n_points samples. All lengths in millimetres.
class Grid1D {
 public:
  /// Throws InvalidArgument unless half_width > 0 and n_points >= 2.
  static Grid1D make(double center, double half_width, std::int64_t n_points);

  double center() const noexcept { return center_; }
  double half_width() const noexcept { return half_width_; }
  double lo() const noexcept { return center_ - half_width_; }
  double hi() const noexcept { return center_ + half_width_; }
  double span() const noexcept { return 2.0 * half_width_; }
  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return n_; }

  /// Endpoints and the midpoint are exact; samples are mirrored about the
  /// center so symmetric grids produce exactly negated coordinates.
  double sample(std::size_t i) const noexcept;
  double operator[](std::size_t i) const noexcept { return sample(i); }
  std::vector<double> samples() const;

  /// Same interval, (n - 1) * factor panels.
  Grid1D refined(std::int64_t factor) const;

  bool contains(double lo, double hi, double rel_tol = 1e-12) const noexcept;

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

  /// Cell index and fractional offset of x, for interpolation. Offsets
  /// within 1e-9 of a node snap to it so node queries are exact. nullopt
  /// outside the interval.
  struct Location {
    std::size_t index;
    double frac;
  };
  std::optional<Location> locate(double x) const noexcept;

 private:
  Grid1D(double center, double half_width, std::size_t n);

  double center_ = 0.0;
  double half_width_ = 1.0;
  std::size_t n_ = 2;
  double step_ = 2.0;
};

class ComplexField1D {
 public:
  /// Throws InvalidArgument on length mismatch or non-finite values.
  ComplexField1D(Grid1D grid, std::vector<Complex> values);

  static ComplexField1D sample(const Grid1D& grid, const std::function<Complex(double)>& fn);

  const Grid1D& grid() const noexcept { return grid_; }
  std::span<const Complex> values() const noexcept { return values_; }

 private:
  Grid1D grid_;
  std::vector<Complex> values_;
};

enum class QuadratureRule { Trapezoid, Simpson };

/// Composite rule over the grid interval. Trapezoid is the default.
Complex integrate(const ComplexField1D& field, QuadratureRule rule = QuadratureRule::Trapezoid);

using Kernel2D = std::function<Complex(double x, double xp)>;

/// Tensor-product trapezoid over gx x gxp. A non-finite kernel value raises
/// NumericDomainError carrying the offending (x, x').
Complex integrate2d(const Kernel2D& kernel, const Grid1D& gx, const Grid1D& gxp);

/// Tensor-product sum with caller-supplied node weights. Rows or columns
/// whose weight is exactly zero are skipped.
Complex integrate2d_weighted(const Kernel2D& kernel, const Grid1D& gx, std::span<const double> wx,
                             const Grid1D& gxp, std::span<const double> wxp);

std::vector<double> trapezoid_weights(const Grid1D& grid);

/// Composite Simpson; with an odd number of panels the last one falls back
/// to the trapezoid rule.
std::vector<double> simpson_weights(const Grid1D& grid);

/// Real piecewise-linear function given by nodes (x_k, y_k) with
/// nondecreasing x. A repeated abscissa encodes a jump. Zero outside the
/// table.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  PiecewiseLinear(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  std::span<const double> x() const noexcept { return x_; }
  std::span<const double> y() const noexcept { return y_; }
  bool empty() const noexcept { return x_.empty(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

/// Weights W_i = integral of m(x)^power * B_i(x), where B_i is the basis of
/// composite Simpson (quadratic Lagrange per panel pair; trailing odd panel
/// linear). Sum_i W_i g(x_i) then integrates m^power * g exactly for
/// piecewise-quadratic g, including across jumps of m. power is 1 or 2.
std::vector<double> product_simpson_weights(const Grid1D& grid, const PiecewiseLinear& m, int power);

}  // namespace ghostsim
