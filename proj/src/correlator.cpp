#include "correlator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "error.hpp"

namespace ghostsim {

namespace {

bool finite(Complex v) noexcept { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

[[noreturn]] void non_finite(const char* what, double x, double xp) {
  std::ostringstream os;
  os.precision(17);
  os << "non-finite " << what << " at (x, x') = (" << x << ", " << xp << ")";
  throw NumericDomainError(os.str(), x, xp);
}

}  // namespace

ArmEnergy arm_energy(const ImpulseResponse& h, double x_out, const Grid1D& g) {
  const auto w = h.input_weights(g, 2);
  ArmEnergy out;
  double peak = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.sample(i);
    const double mod2 = std::norm(h(x_out, x));
    if (!std::isfinite(mod2)) non_finite("impulse response", x_out, x);
    peak = std::max(peak, mod2);
    if (w[i] == 0.0) continue;
    out.value += w[i] * std::norm(h.carrier(x_out, x));
  }
  if (peak > 0.0) {
    const double edge = std::max(std::norm(h(x_out, g.lo())), std::norm(h(x_out, g.hi())));
    out.edge_ratio = edge / peak;
    out.support_warning = out.edge_ratio > kArmSupportTolerance;
  }
  return out;
}

double second_moment_from(double g2, double i_t, double i_r) noexcept { return g2 * i_t * i_r; }

Noise noise_from(double g2, double second_moment) {
  const double radicand = second_moment - g2 * g2;
  if (radicand >= 0.0) return {std::sqrt(radicand), false};
  const double scale = second_moment + g2 * g2;
  if (radicand >= -kNoiseClampWindow * scale) return {0.0, true};
  std::ostringstream os;
  os.precision(6);
  os << "variance radicand " << radicand << " is below -" << kNoiseClampWindow << " of its scale " << scale
     << " (state not unit-norm or support truncated)";
  throw Error(ErrorCode::NormalizationViolation, os.str());
}

double snr_from(double g2, double noise) noexcept {
  if (g2 == 0.0) return 0.0;
  if (noise == 0.0) return std::numeric_limits<double>::infinity();
  return g2 / noise;
}

double averaged_noise(double noise, std::int64_t n_pairs) {
  if (n_pairs < 1) throw_invalid("number of pairs must be >= 1");
  return noise / std::sqrt(static_cast<double>(n_pairs));
}

double averaged_snr(double snr, std::int64_t n_pairs) {
  if (n_pairs < 1) throw_invalid("number of pairs must be >= 1");
  return snr * std::sqrt(static_cast<double>(n_pairs));
}

Correlator::Correlator(CorrelatorSetup setup, std::size_t cache_limit_bytes) : setup_(std::move(setup)) {
  const auto& cert = setup_.state.certification();
  if (!cert) throw_invalid("correlator requires a norm-certified two-photon state");
  if (!setup_.gx.contains(cert->gx.lo(), cert->gx.hi()) || !setup_.gxp.contains(cert->gxp.lo(), cert->gxp.hi())) {
    throw_invalid("correlator grids do not cover the state's certification domain");
  }
  wx_ = setup_.test_arm.input_weights(setup_.gx, 1);
  wxp_ = setup_.reference_arm.input_weights(setup_.gxp, 1);
  for (std::size_t i = 0; i < wx_.size(); ++i) {
    if (wx_[i] != 0.0) rows_.push_back(i);
  }
  for (std::size_t j = 0; j < wxp_.size(); ++j) {
    if (wxp_[j] != 0.0) cols_.push_back(j);
  }
  const double k = setup_.reference_arm.test_coordinate_phase_rate();
  test_phase_.resize(rows_.size(), 1.0);
  if (k != 0.0) {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const double x = setup_.gx.sample(rows_[r]);
      test_phase_[r] = std::polar(1.0, k * x * x);
    }
  }

  const std::size_t entries = rows_.size() * cols_.size();
  if (entries > 0 && entries <= cache_limit_bytes / sizeof(Complex)) {
    phi_cache_.resize(entries);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const double x = setup_.gx.sample(rows_[r]);
      for (std::size_t c = 0; c < cols_.size(); ++c) {
        const double xp = setup_.gxp.sample(cols_[c]);
        const Complex v = setup_.state(x, xp);
        if (!finite(v)) non_finite("two-photon amplitude", x, xp);
        phi_cache_[r * cols_.size() + c] = v;
      }
    }
  }
}

Complex Correlator::source_at(std::size_t row, std::size_t col) const {
  if (!phi_cache_.empty()) return phi_cache_[row * cols_.size() + col];
  const double x = setup_.gx.sample(rows_[row]);
  const double xp = setup_.gxp.sample(cols_[col]);
  const Complex v = setup_.state(x, xp);
  if (!finite(v)) non_finite("two-photon amplitude", x, xp);
  return v;
}

Complex Correlator::amplitude(double x_t, double x_r) const {
  const auto& gx = setup_.gx;
  const auto& gxp = setup_.gxp;
  std::vector<Complex> ref(cols_.size());
  for (std::size_t c = 0; c < cols_.size(); ++c) {
    const double xp = gxp.sample(cols_[c]);
    const Complex h = setup_.reference_arm.carrier(x_r, xp);
    if (!finite(h)) non_finite("reference impulse response", x_r, xp);
    ref[c] = wxp_[cols_[c]] * h;
  }
  Complex total = 0.0;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const double x = gx.sample(rows_[r]);
    const Complex h = setup_.test_arm.carrier(x_t, x);
    if (!finite(h)) non_finite("test impulse response", x_t, x);
    Complex inner = 0.0;
    if (!phi_cache_.empty()) {
      const Complex* row = &phi_cache_[r * cols_.size()];
      for (std::size_t c = 0; c < cols_.size(); ++c) inner += row[c] * ref[c];
    } else {
      for (std::size_t c = 0; c < cols_.size(); ++c) inner += source_at(r, c) * ref[c];
    }
    total += wx_[rows_[r]] * h * test_phase_[r] * inner;
  }
  return total;
}

Complex Correlator::amplitude_direct(double x_t, double x_r) const {
  const double k = setup_.reference_arm.test_coordinate_phase_rate();
  const auto kernel = [&](double x, double xp) {
    return setup_.state(x, xp) * setup_.test_arm.carrier(x_t, x) * std::polar(1.0, k * x * x) *
           setup_.reference_arm.carrier(x_r, xp);
  };
  return integrate2d_weighted(kernel, setup_.gx, wx_, setup_.gxp, wxp_);
}

double Correlator::coincidence_rate(double x_t, double x_r) const { return std::norm(amplitude(x_t, x_r)); }

double Correlator::test_arm_energy(double x_t) const { return arm_energy(setup_.test_arm, x_t, setup_.gx).value; }

double Correlator::reference_arm_energy(double x_r) const {
  return arm_energy(setup_.reference_arm, x_r, setup_.gxp).value;
}

double Correlator::second_moment(double x_t, double x_r) const { return evaluate(x_t, x_r).second_moment; }
double Correlator::noise(double x_t, double x_r) const { return evaluate(x_t, x_r).noise; }
double Correlator::snr(double x_t, double x_r) const { return evaluate(x_t, x_r).snr; }

PointStatistics Correlator::evaluate(double x_t, double x_r) const {
  return evaluate(x_t, x_r, test_arm_energy(x_t), reference_arm_energy(x_r));
}

PointStatistics Correlator::evaluate(double x_t, double x_r, double i_t, double i_r) const {
  PointStatistics p;
  p.x_t = x_t;
  p.x_r = x_r;
  p.amplitude = amplitude(x_t, x_r);
  p.g2 = std::norm(p.amplitude);
  p.i_t = i_t;
  p.i_r = i_r;
  p.second_moment = second_moment_from(p.g2, i_t, i_r);
  const Noise n = noise_from(p.g2, p.second_moment);
  p.noise = n.value;
  p.noise_clamped = n.clamped;
  p.snr = snr_from(p.g2, p.noise);
  p.g2_zero = p.g2 == 0.0;
  return p;
}

}  // namespace ghostsim
