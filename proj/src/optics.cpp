#include "optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "csv_io.hpp"
#include "error.hpp"

namespace ghostsim {

namespace {

constexpr double kPi = std::numbers::pi;

double sin_pi(double x) noexcept {
  // Reduce to r in [-1, 1] so integers map to exact zeros.
  double r = x - 2.0 * std::round(0.5 * x);
  if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(kPi * r);
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw_invalid(std::string(what) + " must be positive and finite");
}

// int_0^1 exp(-i theta tau) dtau and int_0^1 tau exp(-i theta tau) dtau.
std::pair<Complex, Complex> segment_moments(double theta) {
  const Complex alpha(0.0, -theta);
  if (std::abs(theta) < 0.1) {
    Complex e1 = 0.0, e2 = 0.0, pw = 1.0;
    double fact = 1.0;
    for (int k = 0; k < 14; ++k) {
      if (k > 0) {
        pw *= alpha;
        fact *= k;
      }
      e1 += pw / (fact * (k + 1));
      e2 += pw / (fact * (k + 2));
    }
    return {e1, e2};
  }
  const Complex ea = std::exp(alpha);
  const Complex e1 = (ea - 1.0) / alpha;
  const Complex e2 = ea / alpha - (ea - 1.0) / (alpha * alpha);
  return {e1, e2};
}

}  // namespace

double sinc_pi(double x) noexcept {
  if (x == 0.0) return 1.0;
  return sin_pi(x) / (kPi * x);
}

// --- Transmission ----------------------------------------------------------

double Transmission::operator()(double x) const {
  switch (kind_) {
    case TransmissionKind::DoubleSlit: {
      const double half_w = 0.5 * w_, half_d = 0.5 * d_;
      return (std::abs(x - half_d) <= half_w || std::abs(x + half_d) <= half_w) ? 1.0 : 0.0;
    }
    case TransmissionKind::Gaussian:
      return std::exp(-(x * x) / (w_ * w_));
    case TransmissionKind::Tabulated:
      return pl_(x);
  }
  return 0.0;
}

std::vector<double> Transmission::quadrature_weights(const Grid1D& grid, int power) const {
  if (!pl_.empty()) return product_simpson_weights(grid, pl_, power);
  auto w = trapezoid_weights(grid);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] *= std::pow((*this)(grid.sample(i)), power);
  return w;
}

Transmission double_slit(double w_mm, double d_mm) {
  require_positive(w_mm, "slit width w");
  require_positive(d_mm, "slit distance d");
  if (w_mm >= d_mm) throw_invalid("slit width must be smaller than the slit distance (slits would merge)");
  Transmission t;
  t.kind_ = TransmissionKind::DoubleSlit;
  t.w_ = w_mm;
  t.d_ = d_mm;
  const double l0 = -0.5 * d_mm - 0.5 * w_mm, l1 = -0.5 * d_mm + 0.5 * w_mm;
  const double r0 = 0.5 * d_mm - 0.5 * w_mm, r1 = 0.5 * d_mm + 0.5 * w_mm;
  t.pl_ = PiecewiseLinear({l0, l0, l1, l1, r0, r0, r1, r1}, {0, 1, 1, 0, 0, 1, 1, 0});
  return t;
}

Transmission gaussian_transmission(double w_mm) {
  require_positive(w_mm, "object width w");
  Transmission t;
  t.kind_ = TransmissionKind::Gaussian;
  t.w_ = w_mm;
  return t;
}

Transmission tabulated_transmission(PiecewiseLinear table) {
  if (table.empty()) throw_invalid("transmission table is empty");
  for (double v : table.y()) {
    if (v < 0.0 || v > 1.0) throw_invalid("transmission values must lie in [0, 1]");
  }
  Transmission t;
  t.kind_ = TransmissionKind::Tabulated;
  t.pl_ = std::move(table);
  return t;
}

Transmission load_transmission_csv(const std::filesystem::path& path) {
  const auto rows = read_numeric_csv(path, {2});
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(r[0]);
    y.push_back(r[1]);
  }
  return tabulated_transmission(PiecewiseLinear(std::move(x), std::move(y)));
}

// --- Pupil -----------------------------------------------------------------

Complex Pupil::operator()(double x) const {
  switch (kind_) {
    case PupilKind::Rect:
      return std::abs(x) <= 0.5 * size_ ? 1.0 : 0.0;
    case PupilKind::Gaussian:
      return std::exp(-(x * x) / (size_ * size_));
    case PupilKind::Tabulated:
      return {re_(x), im_(x)};
  }
  return 0.0;
}

Complex Pupil::ft(double u) const {
  switch (kind_) {
    case PupilKind::Rect:
      return size_ * sinc_pi(size_ * u);
    case PupilKind::Gaussian:
      return size_ * std::sqrt(kPi) * std::exp(-kPi * kPi * size_ * size_ * u * u);
    case PupilKind::Tabulated: {
      const double omega = 2.0 * kPi * u;
      const auto xs = re_.x();
      const auto yr = re_.y();
      const auto yi = im_.y();
      Complex acc = 0.0;
      for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        const double dx = xs[k + 1] - xs[k];
        if (dx <= 0.0) continue;
        const Complex p0(yr[k], yi[k]), p1(yr[k + 1], yi[k + 1]);
        if (p0 == 0.0 && p1 == 0.0) continue;
        const auto [e1, e2] = segment_moments(omega * dx);
        acc += dx * std::polar(1.0, -omega * xs[k]) * (p0 * e1 + (p1 - p0) * e2);
      }
      return acc;
    }
  }
  return 0.0;
}

Pupil rect_pupil(double D_mm) {
  require_positive(D_mm, "aperture size D");
  Pupil p;
  p.kind_ = PupilKind::Rect;
  p.size_ = D_mm;
  return p;
}

Pupil gaussian_pupil(double sigma_mm) {
  require_positive(sigma_mm, "pupil width sigma");
  Pupil p;
  p.kind_ = PupilKind::Gaussian;
  p.size_ = sigma_mm;
  return p;
}

Pupil tabulated_pupil(PiecewiseLinear re, PiecewiseLinear im) {
  if (re.empty()) throw_invalid("pupil table is empty");
  if (re.x().size() != im.x().size() || !std::equal(re.x().begin(), re.x().end(), im.x().begin())) {
    throw_invalid("pupil real and imaginary tables must share abscissae");
  }
  Pupil p;
  p.kind_ = PupilKind::Tabulated;
  p.size_ = re.x().back() - re.x().front();
  p.re_ = std::move(re);
  p.im_ = std::move(im);
  return p;
}

Pupil load_pupil_csv(const std::filesystem::path& path) {
  const auto rows = read_numeric_csv(path, {2, 3});
  std::vector<double> x, re, im;
  for (const auto& r : rows) {
    x.push_back(r[0]);
    re.push_back(r[1]);
    im.push_back(r.size() == 3 ? r[2] : 0.0);
  }
  auto xi = x;
  return tabulated_pupil(PiecewiseLinear(std::move(x), std::move(re)), PiecewiseLinear(std::move(xi), std::move(im)));
}

Complex pupil_ft(const Pupil& p, double u) {
  if (!std::isfinite(u)) throw_invalid("spatial frequency must be finite");
  return p.ft(u);
}

// --- ImpulseResponse -------------------------------------------------------

Complex ImpulseResponse::carrier(double x_out, double x_in) const {
  switch (kind_) {
    case ArmKind::FourierArm: {
      const double lf = lambda_ * f_;
      return gain_ * Complex(0.0, -1.0 / lf) * std::polar(1.0, -2.0 * kPi * x_out * x_in / lf);
    }
    case ArmKind::TwoFArm: {
      const double lf = lambda_ * f_;
      const double quad = phase_ == QuadraticPhase::SourceCoordinate ? x_out * x_out + x_in * x_in : x_out * x_out;
      return gain_ * pupil_->ft((x_out + x_in) / (2.0 * lf)) / (4.0 * lf * lf) * std::polar(1.0, kPi * quad / (2.0 * lf));
    }
    case ArmKind::Tabulated: {
      const auto lo = table_->g_out.locate(x_out);
      const auto li = table_->g_in.locate(x_in);
      if (!lo || !li) return 0.0;
      const std::size_t nin = table_->g_in.size();
      const auto at = [&](std::size_t i, std::size_t j) { return table_->values[i * nin + j]; };
      const Complex v00 = at(lo->index, li->index);
      if (lo->frac == 0.0 && li->frac == 0.0) return gain_ * v00;
      const std::size_t i1 = std::min(lo->index + 1, table_->g_out.size() - 1);
      const std::size_t j1 = std::min(li->index + 1, nin - 1);
      const double fo = lo->frac, fi = li->frac;
      return gain_ * ((1.0 - fo) * ((1.0 - fi) * v00 + fi * at(lo->index, j1)) +
                      fo * ((1.0 - fi) * at(i1, li->index) + fi * at(i1, j1)));
    }
  }
  return 0.0;
}

Complex ImpulseResponse::operator()(double x_out, double x_in) const {
  const Complex c = carrier(x_out, x_in);
  return object_ ? (*object_)(x_in) * c : c;
}

std::vector<double> ImpulseResponse::input_weights(const Grid1D& grid, int power) const {
  if (object_) return object_->quadrature_weights(grid, power);
  return trapezoid_weights(grid);
}

double ImpulseResponse::test_coordinate_phase_rate() const noexcept {
  if (kind_ != ArmKind::TwoFArm || phase_ != QuadraticPhase::TestCoordinate) return 0.0;
  return kPi / (2.0 * lambda_ * f_);
}

ImpulseResponse ImpulseResponse::scaled(Complex c) const {
  ImpulseResponse h = *this;
  h.gain_ *= c;
  return h;
}

ImpulseResponse fourier_arm(double lambda_mm, double f_mm, Transmission t) {
  require_positive(lambda_mm, "wavelength");
  require_positive(f_mm, "focal length");
  ImpulseResponse h;
  h.kind_ = ArmKind::FourierArm;
  h.lambda_ = lambda_mm;
  h.f_ = f_mm;
  h.object_ = std::move(t);
  return h;
}

ImpulseResponse two_f_arm(double lambda_mm, double f_mm, Pupil p, QuadraticPhase phase) {
  require_positive(lambda_mm, "wavelength");
  require_positive(f_mm, "focal length");
  ImpulseResponse h;
  h.kind_ = ArmKind::TwoFArm;
  h.lambda_ = lambda_mm;
  h.f_ = f_mm;
  h.pupil_ = std::move(p);
  h.phase_ = phase;
  return h;
}

ImpulseResponse tabulated_arm(const Grid1D& g_out, const Grid1D& g_in, std::vector<Complex> values) {
  if (values.size() != g_out.size() * g_in.size()) throw_invalid("impulse-response table size does not match grids");
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw_invalid("impulse-response table has non-finite entries");
  }
  ImpulseResponse h;
  h.kind_ = ArmKind::Tabulated;
  h.table_ = std::make_shared<const ImpulseResponse::Table>(ImpulseResponse::Table{g_out, g_in, std::move(values)});
  return h;
}

Complex eval_h(const ImpulseResponse& h, double x_out, double x_in) {
  if (!std::isfinite(x_out) || !std::isfinite(x_in)) throw_invalid("impulse-response arguments must be finite");
  const Complex v = h(x_out, x_in);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    std::ostringstream os;
    os.precision(17);
    os << "non-finite impulse response at (" << x_out << ", " << x_in << ")";
    throw NumericDomainError(os.str(), x_out, x_in);
  }
  return v;
}

}  // namespace ghostsim
