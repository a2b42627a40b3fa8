#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "error.hpp"
#include "experiments.hpp"
#include "oracles.hpp"

using namespace ghostsim;

namespace {

ScanConfig fig2_coarse(double D = 10.0) {
  ScanConfig c;
  c.source = {2.0, 0.05};
  c.test_arm = {6.5e-4, 100.0, DoubleSlitSpec{0.05, 1.0}};
  c.reference_arm = {6.5e-4, 100.0, RectPupilSpec{D}, QuadraticPhase::SourceCoordinate};
  c.n_pairs = 10000;
  c.grids.n_x = 2049;
  c.grids.n_xp = 1025;
  c.threads = 1;
  return c;
}

CorrelationResult synthetic(const std::vector<double>& g2) {
  CorrelationResult r;
  for (std::size_t i = 0; i < g2.size(); ++i) {
    PointStatistics p;
    p.x_r = -1.0 + 2.0 * double(i) / double(g2.size() - 1);
    p.g2 = g2[i];
    r.records.push_back(p);
    r.g2_max = std::max(r.g2_max, g2[i]);
  }
  return r;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) {
    if (const char* old = std::getenv(name)) old_ = old;
    ::setenv(name, value, 1);
  }
  ~ScopedEnv() {
    if (old_.empty()) {
      ::unsetenv(name_);
    } else {
      ::setenv(name_, old_.c_str(), 1);
    }
  }

 private:
  const char* name_;
  std::string old_;
};

}  // namespace

TEST(ScanConfig, ValidationNamesTheField) {
  auto c = fig2_coarse();
  c.x_r.n_points = 1;
  EXPECT_EQ(code_of([&] { validate(c); }), ErrorCode::InvalidArgument);
  c = fig2_coarse();
  c.x_r.min_mm = 3.0;
  EXPECT_EQ(code_of([&] { validate(c); }), ErrorCode::InvalidArgument);
  c = fig2_coarse();
  c.n_pairs = 0;
  try {
    validate(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("pairs.N"), std::string::npos);
  }
  c = fig2_coarse();
  c.test_arm.object = DoubleSlitSpec{1.0, 0.5};
  EXPECT_EQ(code_of([&] { validate(c); }), ErrorCode::InvalidArgument);
}

TEST(ScanConfig, DefaultWindowIsFourSourceSizes) {
  auto c = fig2_coarse();
  EXPECT_EQ(resolved_window(c), 8.0);
  c.grids.window_mm = 5.0;
  EXPECT_EQ(resolved_window(c), 5.0);
}

TEST(ScanPositions, EndpointsAndCount) {
  const auto xs = scan_positions({-2.0, 2.0, 201});
  ASSERT_EQ(xs.size(), 201u);
  EXPECT_EQ(xs.front(), -2.0);
  EXPECT_EQ(xs.back(), 2.0);
  EXPECT_EQ(xs[100], 0.0);
  EXPECT_EQ(xs[125], 0.5);
}

TEST(ScanReference, Fig2ShapeOnCoarseGrids) {
  const auto r = scan_reference(fig2_coarse());
  ASSERT_EQ(r.records.size(), 201u);
  double max_norm = 0.0;
  for (std::size_t i = 0; i < r.records.size(); ++i) max_norm = std::max(max_norm, r.g2_norm(i));
  EXPECT_EQ(max_norm, 1.0);
  const auto peaks = find_peaks(r);
  ASSERT_GE(peaks.size(), 2u);
  std::vector<double> pos = {r.records[peaks[0]].x_r, r.records[peaks[1]].x_r};
  std::sort(pos.begin(), pos.end());
  EXPECT_NEAR(pos[0], -0.5, 0.05);
  EXPECT_NEAR(pos[1], 0.5, 0.05);
  EXPECT_NEAR(pos[0], -pos[1], 0.02 + 1e-12);  // symmetric within one scan step
  const auto peak = r.peak_index();
  EXPECT_GT(r.snr_avg(peak), 2.0);
  EXPECT_LT(r.snr_avg(peak), 8.0);
}

TEST(ScanReference, NormalizedNoiseColumnIsExact) {
  const auto r = scan_reference(fig2_coarse());
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    EXPECT_EQ(r.dg2_avg_norm(i), r.records[i].noise / (std::sqrt(10000.0) * r.g2_max));
    EXPECT_EQ(r.dg2_norm(i), r.records[i].noise / r.g2_max);
    EXPECT_EQ(r.snr_avg(i), r.records[i].snr * 100.0);
  }
}

TEST(ScanReference, DeterministicAndThreadIndependent) {
  auto c = fig2_coarse();
  c.grids.n_x = 1025;
  c.grids.n_xp = 513;
  c.x_r.n_points = 41;
  const auto a = scan_reference(c);
  const auto b = scan_reference(c);
  c.threads = 4;
  const auto p = scan_reference(c);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].g2, b.records[i].g2);
    EXPECT_EQ(a.records[i].noise, b.records[i].noise);
    EXPECT_LE(std::abs(p.records[i].g2 - a.records[i].g2), 1e-12 * a.records[i].g2);
    EXPECT_LE(std::abs(p.records[i].noise - a.records[i].noise), 1e-12 * a.records[i].noise);
    EXPECT_EQ(p.records[i].x_r, a.records[i].x_r);
  }
}

TEST(ScanReference, ErrorsNameTheFailingPosition) {
  auto c = fig2_coarse();
  c.x_r.n_points = 5;
  c.x_r.min_mm = 0.4;
  c.x_r.max_mm = 0.6;
  detail::set_normalization_fault(1e3);  // pushes G2 far above the Cauchy-Schwarz bound
  const Correlator corr(build_setup(c));
  detail::set_normalization_fault(1.0);
  try {
    scan_reference(corr, c);
    FAIL() << "expected a normalization violation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NormalizationViolation);
    EXPECT_NE(std::string(e.what()).find("at x_r = "), std::string::npos) << e.what();
  }
}

TEST(Contrast, PerfectForZeroValley) {
  EXPECT_EQ(contrast_metric(synthetic({0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0})), 1.0);
  EXPECT_DOUBLE_EQ(contrast_metric(synthetic({0, 0, 1, 0, 0, 0.5, 0, 0, 1, 0, 0})), 1.0 / 3.0);
}

TEST(Contrast, FlatCurveIsUndefined) {
  EXPECT_EQ(code_of([] { contrast_metric(synthetic(std::vector<double>(11, 1.0))); }),
            ErrorCode::UndefinedContrast);
  EXPECT_EQ(code_of([] { contrast_metric(synthetic({0, 1, 0, 0, 0})); }), ErrorCode::UndefinedContrast);
  EXPECT_EQ(code_of([] { contrast_metric(synthetic({0, 0})); }), ErrorCode::UndefinedContrast);
}

TEST(Peaks, ThresholdAndSeparation) {
  // The 0.1 bump is under the 0.2 threshold; the 0.9 bump is too close to 1.
  const auto r = synthetic({0, 1, 0.9, 0.95, 0, 0, 0.1, 0, 0, 0.6, 0});
  const auto p = find_peaks(r);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0], 1u);
  EXPECT_EQ(p[1], 9u);
}

TEST(Peaks, TiesPreferSmallerOffset) {
  const auto r = synthetic({0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0});
  EXPECT_EQ(find_peaks(r).front(), 5u);
}

TEST(ApertureSweep, SingletonMatchesScan) {
  auto c = fig2_coarse(6.0);
  c.x_r.n_points = 81;
  const std::vector<double> d = {6.0};
  const auto sweep = aperture_sweep(c, d);
  ASSERT_EQ(sweep.size(), 1u);
  const auto direct = summarize(scan_reference(c), 6.0);
  EXPECT_EQ(sweep[0].peak_snr, direct.peak_snr);
  EXPECT_EQ(sweep[0].noise_amplitude, direct.noise_amplitude);
  EXPECT_EQ(sweep[0].peak_positions_mm, direct.peak_positions_mm);
  EXPECT_EQ(sweep[0].contrast, direct.contrast);
}

TEST(ApertureSweep, SmallApertureLowersContrastAndNoise) {
  auto c = fig2_coarse();
  const std::vector<double> d = {10.0, 2.0};
  const auto s = aperture_sweep(c, d);
  ASSERT_TRUE(s[0].contrast && s[1].contrast);
  EXPECT_LT(*s[1].contrast, *s[0].contrast);
  const double ratio = s[0].noise_amplitude / s[1].noise_amplitude;
  EXPECT_GT(ratio, 1.4);
  EXPECT_LT(ratio, 3.0);
}

TEST(ApertureSweep, RejectsBadInput) {
  const auto c = fig2_coarse();
  EXPECT_EQ(code_of([&] { aperture_sweep(c, std::vector<double>{}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { aperture_sweep(c, std::vector<double>{5.0, -1.0}); }), ErrorCode::InvalidArgument);
  auto g = c;
  g.reference_arm.pupil = GaussianPupilSpec{1.0};
  EXPECT_EQ(code_of([&] { aperture_sweep(g, std::vector<double>{5.0}); }), ErrorCode::InvalidArgument);
}

TEST(ApertureSweep, MonotonicityReport) {
  std::vector<SweepSummary> s(3);
  s[0].aperture_mm = 10;
  s[0].contrast = 0.9;
  s[1].aperture_mm = 6;
  s[1].contrast = 0.95;
  s[2].aperture_mm = 2;
  s[2].contrast = 0.3;
  EXPECT_EQ(contrast_monotonicity_violations(s).size(), 1u);
  s[1].contrast = 0.5;
  EXPECT_TRUE(contrast_monotonicity_violations(s).empty());
  s[1].contrast.reset();
  EXPECT_TRUE(contrast_monotonicity_violations(s).empty());
}

TEST(Threads, EnvironmentCap) {
  {
    ScopedEnv env("GHOSTSIM_THREADS", "2");
    EXPECT_LE(resolve_threads(0), 2u);
    EXPECT_EQ(resolve_threads(8), 2u);
    EXPECT_EQ(resolve_threads(1), 1u);
  }
  {
    ScopedEnv env("GHOSTSIM_THREADS", "zero");
    EXPECT_EQ(code_of([] { resolve_threads(1); }), ErrorCode::Config);
  }
  {
    ScopedEnv env("GHOSTSIM_THREADS", "0");
    EXPECT_EQ(code_of([] { resolve_threads(1); }), ErrorCode::Config);
  }
}
