#include "source.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

#include "csv_io.hpp"
#include "error.hpp"

namespace ghostsim {

namespace {

std::atomic<double> g_norm_fault{1.0};

}  // namespace

namespace detail {
void set_normalization_fault(double factor) noexcept { g_norm_fault.store(factor); }
double normalization_fault() noexcept { return g_norm_fault.load(); }
}  // namespace detail

Complex TwoPhotonState::unscaled(double x, double xp) const {
  if (kind_ == SourceKind::Gaussian) {
    const double d = x - xp;
    return std::exp(-(x * x + xp * xp) * inv_a2_ - d * d * inv_b2_);
  }
  const auto lx = table_->gx.locate(x);
  const auto lp = table_->gxp.locate(xp);
  if (!lx || !lp) return 0.0;
  const std::size_t nxp = table_->gxp.size();
  const auto at = [&](std::size_t i, std::size_t j) { return table_->values[i * nxp + j]; };
  const Complex v00 = at(lx->index, lp->index);
  if (lx->frac == 0.0 && lp->frac == 0.0) return v00;
  const std::size_t i1 = std::min(lx->index + 1, table_->gx.size() - 1);
  const std::size_t j1 = std::min(lp->index + 1, nxp - 1);
  const double fx = lx->frac, fp = lp->frac;
  return (1.0 - fx) * ((1.0 - fp) * v00 + fp * at(lx->index, j1)) + fx * ((1.0 - fp) * at(i1, lp->index) + fp * at(i1, j1));
}

Complex TwoPhotonState::operator()(double x, double xp) const { return scale_ * unscaled(x, xp); }

GaussianSourceParams TwoPhotonState::gaussian() const {
  if (kind_ != SourceKind::Gaussian) throw_invalid("state is not a Gaussian source");
  return {a_, b_, scale_};
}

TwoPhotonState gaussian_wavefunction(double a_mm, double b_mm) {
  if (!(a_mm > 0.0) || !std::isfinite(a_mm)) throw_invalid("source size a must be positive");
  if (!(b_mm > 0.0) || !std::isfinite(b_mm)) throw_invalid("entanglement width b must be positive");
  TwoPhotonState s;
  s.kind_ = SourceKind::Gaussian;
  s.a_ = a_mm;
  s.b_ = b_mm;
  s.inv_a2_ = 1.0 / (a_mm * a_mm);
  s.inv_b2_ = 1.0 / (b_mm * b_mm);
  return s;
}

TwoPhotonState tabulated_wavefunction(const Grid1D& gx, const Grid1D& gxp, std::vector<Complex> values) {
  if (values.size() != gx.size() * gxp.size()) {
    std::ostringstream os;
    os << "wavefunction table has " << values.size() << " entries, expected " << gx.size() << " x " << gxp.size();
    throw_invalid(os.str());
  }
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw_invalid("wavefunction table has non-finite entries");
  }
  TwoPhotonState s;
  s.kind_ = SourceKind::Tabulated;
  s.table_ = std::make_shared<const TwoPhotonState::Table>(TwoPhotonState::Table{gx, gxp, std::move(values)});
  return s;
}

namespace {

Grid1D grid_from_axis(const std::vector<double>& axis, const char* name) {
  if (axis.size() < 2) throw Error(ErrorCode::Parse, std::string("wavefunction CSV: ") + name + " axis needs >= 2 values");
  const double lo = axis.front(), hi = axis.back();
  if (!(hi > lo)) throw Error(ErrorCode::Parse, std::string("wavefunction CSV: ") + name + " axis must increase");
  const auto g = Grid1D::make(0.5 * (lo + hi), 0.5 * (hi - lo), static_cast<std::int64_t>(axis.size()));
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (std::abs(axis[i] - g.sample(i)) > 1e-9 * g.span()) {
      throw Error(ErrorCode::Parse, std::string("wavefunction CSV: ") + name + " axis is not uniform");
    }
  }
  return g;
}

}  // namespace

TwoPhotonState load_wavefunction_csv(const std::filesystem::path& path) {
  const auto rows = read_numeric_csv(path, {4});
  std::size_t nxp = 0;
  while (nxp < rows.size() && rows[nxp][0] == rows[0][0]) ++nxp;
  if (nxp == 0 || rows.size() % nxp != 0) throw Error(ErrorCode::Parse, "wavefunction CSV is not a full cross-product");
  const std::size_t nx = rows.size() / nxp;
  std::vector<double> xs(nx), xps(nxp);
  for (std::size_t i = 0; i < nx; ++i) xs[i] = rows[i * nxp][0];
  for (std::size_t j = 0; j < nxp; ++j) xps[j] = rows[j][1];
  std::vector<Complex> values(rows.size());
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < nxp; ++j) {
      const auto& r = rows[i * nxp + j];
      if (r[0] != xs[i] || r[1] != xps[j]) {
        throw Error(ErrorCode::Parse, "wavefunction CSV rows must be row-major in x then x'");
      }
      values[i * nxp + j] = {r[2], r[3]};
    }
  }
  return tabulated_wavefunction(grid_from_axis(xs, "x"), grid_from_axis(xps, "x'"), std::move(values));
}

double norm_squared(const TwoPhotonState& state, const Grid1D& gx, const Grid1D& gxp) {
  return integrate2d([&](double x, double xp) { return Complex(std::norm(state(x, xp))); }, gx, gxp).real();
}

TwoPhotonState normalize(const TwoPhotonState& state, const Grid1D& gx, const Grid1D& gxp) {
  double peak = 0.0;
  double edge = 0.0;
  const std::size_t nx = gx.size(), nxp = gxp.size();
  const Complex total = integrate2d(
      [&](double x, double xp) {
        const double v = std::norm(state(x, xp));
        peak = std::max(peak, v);
        return Complex(v);
      },
      gx, gxp);
  for (std::size_t i = 0; i < nx; ++i) {
    edge = std::max({edge, std::norm(state(gx.sample(i), gxp.lo())), std::norm(state(gx.sample(i), gxp.hi()))});
  }
  for (std::size_t j = 0; j < nxp; ++j) {
    edge = std::max({edge, std::norm(state(gx.lo(), gxp.sample(j))), std::norm(state(gx.hi(), gxp.sample(j)))});
  }
  const double norm2 = total.real();
  if (!(norm2 > 0.0) || peak == 0.0) throw_invalid("wavefunction has zero norm on the certification grids");
  if (edge > kSupportTolerance * peak) {
    std::ostringstream os;
    os << "wavefunction support not covered: boundary |phi|^2 is " << edge / peak << " of the peak (limit "
       << kSupportTolerance << ")";
    throw Error(ErrorCode::Truncation, os.str());
  }
  TwoPhotonState out = state;
  out.scale_ = state.scale_ / std::sqrt(norm2) * detail::normalization_fault();
  out.certification_ = TwoPhotonState::Certification{gx, gxp};
  return out;
}

TwoPhotonState::Certification default_certification_grids(double a_mm, std::int64_t n_x, std::int64_t n_xp) {
  if (!(a_mm > 0.0)) throw_invalid("source size a must be positive");
  return {Grid1D::make(0.0, 4.0 * a_mm, n_x), Grid1D::make(0.0, 4.0 * a_mm, n_xp)};
}

}  // namespace ghostsim
