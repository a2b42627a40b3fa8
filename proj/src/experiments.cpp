#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>

#include "error.hpp"
#include "parallel.hpp"

namespace ghostsim {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw_invalid(what);
}

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::string annotate(const std::string& what, double x_r) {
  std::ostringstream os;
  os.precision(17);
  os << "at x_r = " << x_r << " mm: " << what;
  return os.str();
}

}  // namespace

void validate(const ScanConfig& c) {
  require(positive(c.source.a_mm), "source.a_mm must be positive");
  require(positive(c.source.b_mm), "source.b_mm must be positive");
  require(positive(c.test_arm.lambda_mm), "test_arm.lambda must be positive");
  require(positive(c.test_arm.f_mm), "test_arm.f_mm must be positive");
  require(positive(c.reference_arm.lambda_mm), "reference_arm.lambda must be positive");
  require(positive(c.reference_arm.f_mm), "reference_arm.f_mm must be positive");
  std::visit(Overloaded{
                 [](const DoubleSlitSpec& s) {
                   require(positive(s.w_mm), "test_arm.object.double_slit.w_mm must be positive");
                   require(positive(s.d_mm), "test_arm.object.double_slit.d_mm must be positive");
                   require(s.w_mm < s.d_mm, "test_arm.object.double_slit.w_mm must be smaller than d_mm");
                 },
                 [](const GaussianObjectSpec& s) { require(positive(s.w_mm), "test_arm.object.gaussian.w_mm must be positive"); },
                 [](const TabulatedSpec& s) { require(!s.path.empty(), "test_arm.object.tabulated.path is empty"); },
             },
             c.test_arm.object);
  std::visit(Overloaded{
                 [](const RectPupilSpec& s) { require(positive(s.D_mm), "reference_arm.pupil.rect.D_mm must be positive"); },
                 [](const GaussianPupilSpec& s) {
                   require(positive(s.sigma_mm), "reference_arm.pupil.gaussian.sigma_mm must be positive");
                 },
                 [](const TabulatedSpec& s) { require(!s.path.empty(), "reference_arm.pupil.tabulated.path is empty"); },
             },
             c.reference_arm.pupil);
  require(std::isfinite(c.x_t_fixed), "scan.xt_mm must be finite");
  require(std::isfinite(c.x_r.min_mm) && std::isfinite(c.x_r.max_mm) && c.x_r.min_mm < c.x_r.max_mm,
          "scan.xr_min_mm must be smaller than scan.xr_max_mm");
  require(c.x_r.n_points >= 2, "scan.n_points must be >= 2");
  require(c.n_pairs >= 1, "pairs.N must be >= 1");
  require(c.grids.n_x >= 2, "numerics.n_x must be >= 2");
  require(c.grids.n_xp >= 2, "numerics.n_xp must be >= 2");
  if (c.grids.window_mm) require(positive(*c.grids.window_mm), "numerics.window_mm must be positive");
}

double resolved_window(const ScanConfig& config) {
  return config.grids.window_mm.value_or(kDefaultWindowPerSourceSize * config.source.a_mm);
}

Transmission build_object(const ObjectSpec& spec) {
  return std::visit(Overloaded{
                        [](const DoubleSlitSpec& s) { return double_slit(s.w_mm, s.d_mm); },
                        [](const GaussianObjectSpec& s) { return gaussian_transmission(s.w_mm); },
                        [](const TabulatedSpec& s) { return load_transmission_csv(s.path); },
                    },
                    spec);
}

Pupil build_pupil(const PupilSpec& spec) {
  return std::visit(Overloaded{
                        [](const RectPupilSpec& s) { return rect_pupil(s.D_mm); },
                        [](const GaussianPupilSpec& s) { return gaussian_pupil(s.sigma_mm); },
                        [](const TabulatedSpec& s) { return load_pupil_csv(s.path); },
                    },
                    spec);
}

TwoPhotonState build_state(const ScanConfig& config) {
  validate(config);
  const double window = resolved_window(config);
  const auto gx = Grid1D::make(0.0, window, config.grids.n_x);
  const auto gxp = Grid1D::make(0.0, window, config.grids.n_xp);
  return normalize(gaussian_wavefunction(config.source.a_mm, config.source.b_mm), gx, gxp);
}

CorrelatorSetup build_setup(const ScanConfig& config, const TwoPhotonState& normalized_state) {
  validate(config);
  const double window = resolved_window(config);
  return CorrelatorSetup{
      normalized_state,
      fourier_arm(config.test_arm.lambda_mm, config.test_arm.f_mm, build_object(config.test_arm.object)),
      two_f_arm(config.reference_arm.lambda_mm, config.reference_arm.f_mm, build_pupil(config.reference_arm.pupil),
                config.reference_arm.phase),
      Grid1D::make(0.0, window, config.grids.n_x),
      Grid1D::make(0.0, window, config.grids.n_xp),
  };
}

CorrelatorSetup build_setup(const ScanConfig& config) { return build_setup(config, build_state(config)); }

unsigned resolve_threads(unsigned requested) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GHOSTSIM_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1) {
      throw Error(ErrorCode::Config, std::string("GHOSTSIM_THREADS must be an integer >= 1, got '") + env + "'");
    }
    n = std::min<unsigned>(n, static_cast<unsigned>(std::min<long>(cap, std::numeric_limits<unsigned>::max())));
  }
  return n;
}

// --- CorrelationResult -----------------------------------------------------

double CorrelationResult::g2_norm(std::size_t i) const { return g2_max > 0.0 ? records[i].g2 / g2_max : 0.0; }

double CorrelationResult::dg2_norm(std::size_t i) const { return g2_max > 0.0 ? records[i].noise / g2_max : 0.0; }

double CorrelationResult::dg2_avg_norm(std::size_t i) const {
  if (n_pairs < 1) throw_invalid("n_pairs must be >= 1");
  return g2_max > 0.0 ? records[i].noise / (std::sqrt(static_cast<double>(n_pairs)) * g2_max) : 0.0;
}

double CorrelationResult::snr_avg(std::size_t i) const { return averaged_snr(records[i].snr, n_pairs); }

std::string CorrelationResult::flags(std::size_t i) const {
  const auto& r = records[i];
  std::string out;
  const auto add = [&](const char* f) {
    if (!out.empty()) out += '|';
    out += f;
  };
  if (r.g2_zero) add("g2_zero");
  if (std::isinf(r.snr)) add("snr_inf");
  if (r.noise_clamped) add("noise_clamped");
  return out;
}

std::size_t CorrelationResult::peak_index() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const double g = records[i].g2, gb = records[best].g2;
    if (g > gb || (g == gb && std::abs(records[i].x_r) < std::abs(records[best].x_r))) best = i;
  }
  return best;
}

std::vector<double> scan_positions(const ScanRange& range) {
  return Grid1D::make(0.5 * (range.min_mm + range.max_mm), 0.5 * (range.max_mm - range.min_mm), range.n_points)
      .samples();
}

CorrelationResult scan_reference(const ScanConfig& config) {
  const Correlator correlator(build_setup(config));
  return scan_reference(correlator, config);
}

CorrelationResult scan_reference(const Correlator& correlator, const ScanConfig& config) {
  validate(config);
  const auto xs = scan_positions(config.x_r);
  const unsigned threads = resolve_threads(config.threads);
  const auto& setup = correlator.setup();

  // Arm energies are tabulated before the parallel region: I_t once for
  // the fixed x_t, I_r once per x_r.
  const double i_t = arm_energy(setup.test_arm, config.x_t_fixed, setup.gx).value;
  std::vector<double> i_r(xs.size());
  parallel_for(xs.size(), threads, [&](std::size_t k) { i_r[k] = arm_energy(setup.reference_arm, xs[k], setup.gxp).value; });

  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ xs.size());
  std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
  for (int probe = 0; probe < 3; ++probe) {
    const std::size_t k = pick(rng);
    const double direct = correlator.reference_arm_energy(xs[k]);
    if (direct != i_r[k]) throw Error(ErrorCode::Internal, annotate("cached reference-arm energy is stale", xs[k]));
  }
  if (correlator.test_arm_energy(config.x_t_fixed) != i_t) {
    throw Error(ErrorCode::Internal, "cached test-arm energy is stale");
  }

  CorrelationResult result;
  result.records.resize(xs.size());
  result.n_pairs = config.n_pairs;
  result.config = config;
  parallel_for(xs.size(), threads, [&](std::size_t k) {
    try {
      result.records[k] = correlator.evaluate(config.x_t_fixed, xs[k], i_t, i_r[k]);
    } catch (const NumericDomainError& e) {
      throw NumericDomainError(annotate(e.what(), xs[k]), e.x(), e.xp());
    } catch (const Error& e) {
      throw Error(e.code(), annotate(e.what(), xs[k]));
    }
  });
  for (const auto& r : result.records) result.g2_max = std::max(result.g2_max, r.g2);
  return result;
}

std::vector<std::size_t> find_peaks(const CorrelationResult& result) {
  const auto& rec = result.records;
  std::vector<std::size_t> candidates;
  if (rec.size() < 3 || !(result.g2_max > 0.0)) return candidates;
  const double floor = kPeakThreshold * result.g2_max;
  for (std::size_t i = 1; i + 1 < rec.size(); ++i) {
    const double g = rec[i].g2, l = rec[i - 1].g2, r = rec[i + 1].g2;
    if (g >= l && g >= r && (g > l || g > r) && g > floor) candidates.push_back(i);
  }
  std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    if (rec[a].g2 != rec[b].g2) return rec[a].g2 > rec[b].g2;
    if (std::abs(rec[a].x_r) != std::abs(rec[b].x_r)) return std::abs(rec[a].x_r) < std::abs(rec[b].x_r);
    return a < b;
  });
  std::vector<std::size_t> peaks;
  for (std::size_t c : candidates) {
    const bool separated = std::all_of(peaks.begin(), peaks.end(), [&](std::size_t p) {
      return (c > p ? c - p : p - c) >= kPeakSeparation;
    });
    if (separated) peaks.push_back(c);
  }
  return peaks;
}

double contrast_metric(const CorrelationResult& result) {
  if (result.records.size() < 3) throw Error(ErrorCode::UndefinedContrast, "contrast needs at least 3 scan points");
  const auto peaks = find_peaks(result);
  if (peaks.size() < 2) {
    throw Error(ErrorCode::UndefinedContrast, "contrast undefined: fewer than two distinct maxima");
  }
  const auto& rec = result.records;
  const double peak = 0.5 * (rec[peaks[0]].g2 + rec[peaks[1]].g2);
  const double mid = 0.5 * (rec[peaks[0]].x_r + rec[peaks[1]].x_r);
  std::size_t valley = 0;
  for (std::size_t i = 1; i < rec.size(); ++i) {
    if (std::abs(rec[i].x_r - mid) < std::abs(rec[valley].x_r - mid)) valley = i;
  }
  const double v = rec[valley].g2;
  return std::clamp((peak - v) / (peak + v), 0.0, 1.0);
}

SweepSummary summarize(const CorrelationResult& result, double aperture_mm) {
  SweepSummary s;
  s.aperture_mm = aperture_mm;
  if (!result.records.empty()) s.peak_snr = result.snr_avg(result.peak_index());
  std::vector<std::size_t> peaks = find_peaks(result);
  std::sort(peaks.begin(), peaks.end());
  for (std::size_t p : peaks) s.peak_positions_mm.push_back(result.records[p].x_r);
  try {
    s.contrast = contrast_metric(result);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UndefinedContrast) throw;
  }
  for (std::size_t i = 0; i < result.records.size(); ++i) s.noise_amplitude = std::max(s.noise_amplitude, result.dg2_avg_norm(i));
  return s;
}

std::vector<SweepSummary> aperture_sweep(const ScanConfig& base, std::span<const double> apertures) {
  if (apertures.empty()) throw_invalid("aperture sweep needs at least one aperture");
  if (!std::holds_alternative<RectPupilSpec>(base.reference_arm.pupil)) {
    throw_invalid("aperture sweep requires a rect pupil in the base configuration");
  }
  for (double d : apertures) {
    if (!positive(d)) throw_invalid("aperture sizes must be positive");
  }
  const TwoPhotonState state = build_state(base);
  std::vector<SweepSummary> out;
  out.reserve(apertures.size());
  for (double d : apertures) {
    ScanConfig c = base;
    c.reference_arm.pupil = RectPupilSpec{d};
    const Correlator correlator(build_setup(c, state));
    out.push_back(summarize(scan_reference(correlator, c), d));
  }
  return out;
}

std::vector<std::string> contrast_monotonicity_violations(std::span<const SweepSummary> sweep) {
  std::vector<const SweepSummary*> sorted;
  for (const auto& s : sweep) sorted.push_back(&s);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->aperture_mm > b->aperture_mm; });
  std::vector<std::string> out;
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    const auto* big = sorted[k - 1];
    const auto* small = sorted[k];
    if (!big->contrast || !small->contrast) continue;
    if (*small->contrast > *big->contrast) {
      std::ostringstream os;
      os << "contrast rises from " << *big->contrast << " at D = " << big->aperture_mm << " mm to " << *small->contrast
         << " at D = " << small->aperture_mm << " mm";
      out.push_back(os.str());
    }
  }
  return out;
}

}  // namespace ghostsim
