#include "numgrid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace ghostsim {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::NumericDomain: return "numeric-domain";
    case ErrorCode::Truncation: return "truncation";
    case ErrorCode::NormalizationViolation: return "normalization-violation";
    case ErrorCode::UndefinedContrast: return "undefined-contrast";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

Grid1D::Grid1D(double center, double half_width, std::size_t n)
    : center_(center), half_width_(half_width), n_(n), step_(2.0 * half_width / static_cast<double>(n - 1)) {}

Grid1D Grid1D::make(double center, double half_width, std::int64_t n_points) {
  if (!std::isfinite(center)) throw_invalid("grid center must be finite");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw_invalid("grid half_width must be positive and finite");
  }
  if (n_points < 2) throw_invalid("grid needs at least 2 points");
  return Grid1D(center, half_width, static_cast<std::size_t>(n_points));
}

double Grid1D::sample(std::size_t i) const noexcept {
  const std::size_t last = n_ - 1;
  if (2 * i == last) return center_;
  if (2 * i < last) return lo() + static_cast<double>(i) * step_;
  return hi() - static_cast<double>(last - i) * step_;
}

std::vector<double> Grid1D::samples() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = sample(i);
  return out;
}

Grid1D Grid1D::refined(std::int64_t factor) const {
  if (factor < 1) throw_invalid("refinement factor must be >= 1");
  return Grid1D(center_, half_width_, (n_ - 1) * static_cast<std::size_t>(factor) + 1);
}

std::optional<Grid1D::Location> Grid1D::locate(double x) const noexcept {
  const double slack = 1e-12 * span();
  if (!(x >= lo() - slack && x <= hi() + slack)) return std::nullopt;
  const double t = (x - lo()) / step_;
  const double nearest = std::round(t);
  const auto last = static_cast<double>(n_ - 1);
  if (std::abs(t - nearest) <= 1e-9) return Location{static_cast<std::size_t>(std::clamp(nearest, 0.0, last)), 0.0};
  const double fl = std::clamp(std::floor(t), 0.0, last - 1.0);
  return Location{static_cast<std::size_t>(fl), std::clamp(t - fl, 0.0, 1.0)};
}

bool Grid1D::contains(double a, double b, double rel_tol) const noexcept {
  const double slack = rel_tol * std::max(1.0, span());
  return lo() <= a + slack && hi() >= b - slack;
}

ComplexField1D::ComplexField1D(Grid1D grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw_invalid("field length does not match grid");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag())) {
      std::ostringstream os;
      os << "non-finite field value at x = " << grid_.sample(i);
      throw_invalid(os.str());
    }
  }
}

ComplexField1D ComplexField1D::sample(const Grid1D& grid, const std::function<Complex(double)>& fn) {
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.sample(i));
  return ComplexField1D(grid, std::move(v));
}

namespace {

// Trapezoid sum without the step factor; the caller scales by span/(n-1)
// so that constants integrate exactly.
template <class Get>
Complex trapezoid_sum(std::size_t n, Get&& get) {
  Complex s = 0.5 * (get(0) + get(n - 1));
  for (std::size_t i = 1; i + 1 < n; ++i) s += get(i);
  return s;
}

Complex checked(Complex v, double x, double xp) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    std::ostringstream os;
    os.precision(17);
    os << "non-finite kernel value at (x, x') = (" << x << ", " << xp << ")";
    throw NumericDomainError(os.str(), x, xp);
  }
  return v;
}

}  // namespace

Complex integrate(const ComplexField1D& field, QuadratureRule rule) {
  const auto& g = field.grid();
  const auto v = field.values();
  if (rule == QuadratureRule::Trapezoid) {
    const Complex s = trapezoid_sum(g.size(), [&](std::size_t i) { return v[i]; });
    return s * g.span() / static_cast<double>(g.size() - 1);
  }
  const auto w = simpson_weights(g);
  Complex s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i];
  return s;
}

Complex integrate2d(const Kernel2D& kernel, const Grid1D& gx, const Grid1D& gxp) {
  const std::size_t nxp = gxp.size();
  const Complex s = trapezoid_sum(gx.size(), [&](std::size_t i) {
    const double x = gx.sample(i);
    return trapezoid_sum(nxp, [&](std::size_t j) {
      const double xp = gxp.sample(j);
      return checked(kernel(x, xp), x, xp);
    });
  });
  return s * (gx.span() * gxp.span()) /
         (static_cast<double>(gx.size() - 1) * static_cast<double>(nxp - 1));
}

Complex integrate2d_weighted(const Kernel2D& kernel, const Grid1D& gx, std::span<const double> wx,
                             const Grid1D& gxp, std::span<const double> wxp) {
  if (wx.size() != gx.size() || wxp.size() != gxp.size()) {
    throw_invalid("weight vector length does not match grid");
  }
  Complex total = 0.0;
  for (std::size_t i = 0; i < gx.size(); ++i) {
    if (wx[i] == 0.0) continue;
    const double x = gx.sample(i);
    Complex row = 0.0;
    for (std::size_t j = 0; j < gxp.size(); ++j) {
      if (wxp[j] == 0.0) continue;
      const double xp = gxp.sample(j);
      row += wxp[j] * checked(kernel(x, xp), x, xp);
    }
    total += wx[i] * row;
  }
  return total;
}

std::vector<double> trapezoid_weights(const Grid1D& grid) {
  std::vector<double> w(grid.size(), grid.step());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

std::vector<double> simpson_weights(const Grid1D& grid) {
  const std::size_t n = grid.size();
  const double h = grid.step();
  std::vector<double> w(n, 0.0);
  const std::size_t panels = n - 1;
  const std::size_t paired = panels - panels % 2;
  for (std::size_t k = 0; k < paired; k += 2) {
    w[k] += h / 3.0;
    w[k + 1] += 4.0 * h / 3.0;
    w[k + 2] += h / 3.0;
  }
  if (paired < panels) {
    w[n - 2] += 0.5 * h;
    w[n - 1] += 0.5 * h;
  }
  return w;
}

PiecewiseLinear::PiecewiseLinear(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) throw_invalid("piecewise-linear table: x and y lengths differ");
  if (x_.size() < 2) throw_invalid("piecewise-linear table needs at least 2 nodes");
  for (std::size_t k = 0; k < x_.size(); ++k) {
    if (!std::isfinite(x_[k]) || !std::isfinite(y_[k])) {
      throw_invalid("piecewise-linear table has non-finite entries");
    }
    if (k > 0 && x_[k] < x_[k - 1]) throw_invalid("piecewise-linear abscissae must be nondecreasing");
    if (k > 1 && x_[k] == x_[k - 1] && x_[k - 1] == x_[k - 2]) {
      throw_invalid("piecewise-linear table repeats an abscissa more than twice");
    }
  }
  if (x_.front() == x_.back()) throw_invalid("piecewise-linear table has zero extent");
}

double PiecewiseLinear::operator()(double x) const {
  if (x_.empty() || x < x_.front() || x > x_.back()) return 0.0;
  // First node strictly greater than x.
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  if (it == x_.end()) {
    // x == last abscissa; average both sides if the table ends in a jump.
    const std::size_t n = x_.size();
    return x_[n - 2] == x_[n - 1] ? 0.5 * (y_[n - 2] + y_[n - 1]) : y_[n - 1];
  }
  const std::size_t k = static_cast<std::size_t>(it - x_.begin());
  if (k == 0) return 0.0;
  if (x_[k - 1] == x && k >= 2 && x_[k - 2] == x) return 0.5 * (y_[k - 2] + y_[k - 1]);
  const double x0 = x_[k - 1], x1 = x_[k];
  const double t = (x - x0) / (x1 - x0);
  return y_[k - 1] + t * (y_[k] - y_[k - 1]);
}

std::vector<double> product_simpson_weights(const Grid1D& grid, const PiecewiseLinear& m, int power) {
  if (power != 1 && power != 2) throw_invalid("product weights support power 1 or 2");
  const std::size_t n = grid.size();
  const double h = grid.step();
  const double lo = grid.lo();
  const std::size_t panels = n - 1;
  const std::size_t paired = panels - panels % 2;
  std::vector<double> w(n, 0.0);

  // 3-point Gauss-Legendre: exact for the degree <= 4 products that occur.
  static constexpr std::array<double, 3> gl_node = {-0.7745966692414834, 0.0, 0.7745966692414834};
  static constexpr std::array<double, 3> gl_weight = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

  const auto xs = m.x();
  const auto ys = m.y();
  for (std::size_t s = 0; s + 1 < xs.size(); ++s) {
    double a = xs[s], b = xs[s + 1];
    const double ya = ys[s], yb = ys[s + 1];
    if (b <= a || (ya == 0.0 && yb == 0.0)) continue;
    const double slope = (yb - ya) / (b - a);
    const double x0 = a;
    a = std::max(a, grid.lo());
    b = std::min(b, grid.hi());
    if (b <= a) continue;

    // Walk the rule's cells (pairs of panels, plus the trailing panel).
    std::size_t cell_start = static_cast<std::size_t>(std::max(0.0, std::floor((a - lo) / h)));
    cell_start = std::min(cell_start, panels - 1);
    if (cell_start < paired) cell_start -= cell_start % 2;
    while (cell_start < panels) {
      const bool pair = cell_start < paired;
      const std::size_t width = pair ? 2 : 1;
      const double c0 = grid.sample(cell_start);
      const double c1 = grid.sample(cell_start + width);
      if (c0 >= b) break;
      const double l = std::max(a, c0), r = std::min(b, c1);
      if (r > l) {
        const double mid = 0.5 * (l + r), half = 0.5 * (r - l);
        for (std::size_t q = 0; q < 3; ++q) {
          const double x = mid + half * gl_node[q];
          double mv = ya + slope * (x - x0);
          if (power == 2) mv *= mv;
          const double wq = half * gl_weight[q] * mv;
          const double s_loc = (x - c0) / h;
          if (pair) {
            w[cell_start] += wq * 0.5 * (s_loc - 1.0) * (s_loc - 2.0);
            w[cell_start + 1] += wq * s_loc * (2.0 - s_loc);
            w[cell_start + 2] += wq * 0.5 * s_loc * (s_loc - 1.0);
          } else {
            w[cell_start] += wq * (1.0 - s_loc);
            w[cell_start + 1] += wq * s_loc;
          }
        }
      }
      cell_start += width;
    }
  }
  return w;
}

}  // namespace ghostsim
