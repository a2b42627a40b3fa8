#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "error.hpp"
#include "oracles.hpp"
#include "source.hpp"

using namespace ghostsim;

namespace {

TwoPhotonState normalized_gaussian(double a, double b, std::int64_t n) {
  const auto cert = default_certification_grids(a, n, n);
  return normalize(gaussian_wavefunction(a, b), cert.gx, cert.gxp);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST(GaussianSource, PaperParametersNormalizeToAboutThree) {
  const auto s = normalized_gaussian(2.0, 0.05, 2049);
  EXPECT_NEAR(s.scale(), 3.00, 0.005);
  EXPECT_LT(oracle::rel(s.scale(), oracle::gaussian_norm_constant(2.0, 0.05)), 1e-6);
  EXPECT_TRUE(s.norm_certified());
}

TEST(GaussianSource, WideEntanglementLimitIsSeparable) {
  const auto s = normalized_gaussian(2.0, 1e6, 513);
  EXPECT_NEAR(s.scale(), std::sqrt(2.0 / (oracle::pi * 4.0)), 1e-9);
  EXPECT_NEAR(s.scale(), 0.3989, 1e-4);
}

TEST(GaussianSource, MatchesClosedFormForRandomParameters) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ua(0.5, 5.0), ub(std::log(0.01), std::log(1.0));
  for (int k = 0; k < 10; ++k) {
    const double a = ua(rng), b = std::exp(ub(rng));
    const auto n = static_cast<std::int64_t>(std::ceil(20.0 * a / b)) + 1;
    const auto s = normalized_gaussian(a, b, std::max<std::int64_t>(n, 257));
    EXPECT_LT(oracle::rel(s.scale(), oracle::gaussian_norm_constant(a, b)), 1e-6) << "a=" << a << " b=" << b;
  }
}

TEST(GaussianSource, NormalizeIsIdempotent) {
  const auto cert = default_certification_grids(1.3, 801, 801);
  const auto s = normalize(gaussian_wavefunction(1.3, 0.2), cert.gx, cert.gxp);
  const auto t = normalize(s, cert.gx, cert.gxp);
  EXPECT_LT(oracle::rel(t.scale(), s.scale()), 1e-9);
  EXPECT_NEAR(norm_squared(t, cert.gx, cert.gxp), 1.0, 1e-12);
}

TEST(GaussianSource, NormStableUnderRefinement) {
  const auto cert = default_certification_grids(2.0, 2049, 2049);
  const auto s = normalize(gaussian_wavefunction(2.0, 0.05), cert.gx, cert.gxp);
  EXPECT_NEAR(norm_squared(s, cert.gx, cert.gxp), 1.0, 1e-6);
  EXPECT_LT(std::abs(norm_squared(s, cert.gx.refined(2), cert.gxp.refined(2)) - 1.0), 1e-8);
}

TEST(GaussianSource, SymmetricUnderSwapAndReflection) {
  const auto s = normalized_gaussian(1.7, 0.3, 513);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int k = 0; k < 200; ++k) {
    const double x = u(rng), xp = u(rng);
    EXPECT_EQ(s(x, xp), s(xp, x));
    EXPECT_EQ(s(-x, -xp), s(x, xp));
  }
}

TEST(GaussianSource, RejectsNonPositiveWidths) {
  EXPECT_EQ(code_of([] { gaussian_wavefunction(0.0, 1.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { gaussian_wavefunction(1.0, -1.0); }), ErrorCode::InvalidArgument);
}

TEST(Normalize, DetectsTruncatedSupport) {
  const auto g = Grid1D::make(0.0, 4.0, 257);  // 2a for a = 2
  EXPECT_EQ(code_of([&] { normalize(gaussian_wavefunction(2.0, 0.5), g, g); }), ErrorCode::Truncation);
}

TEST(Normalize, AllZeroTableHasZeroNorm) {
  const auto g = Grid1D::make(0.0, 1.0, 5);
  const auto t = tabulated_wavefunction(g, g, std::vector<Complex>(25, 0.0));
  EXPECT_EQ(code_of([&] { normalize(t, g, g); }), ErrorCode::InvalidArgument);
}

TEST(Normalize, FaultHookScalesAmplitude) {
  const auto cert = default_certification_grids(1.0, 257, 257);
  const double clean = normalize(gaussian_wavefunction(1.0, 0.4), cert.gx, cert.gxp).scale();
  detail::set_normalization_fault(2.0);
  const double faulty = normalize(gaussian_wavefunction(1.0, 0.4), cert.gx, cert.gxp).scale();
  detail::set_normalization_fault(1.0);
  EXPECT_DOUBLE_EQ(faulty, 2.0 * clean);
}

TEST(TabulatedSource, InterpolatesGaussianAtMidpoints) {
  const double a = 2.0, b = 0.05, c = oracle::gaussian_norm_constant(a, b);
  const auto g = Grid1D::make(0.0, 0.015, 1001);
  auto ref = gaussian_wavefunction(a, b);
  std::vector<Complex> values;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) values.push_back(c * ref(g.sample(i), g.sample(j)));
  const auto t = tabulated_wavefunction(g, g, values);
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < g.size(); i += 37) {
    for (std::size_t j = 0; j + 1 < g.size(); j += 41) {
      const double x = 0.5 * (g.sample(i) + g.sample(i + 1)), xp = 0.5 * (g.sample(j) + g.sample(j + 1));
      worst = std::max(worst, std::abs(t(x, xp) - c * ref(x, xp)));
    }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(TabulatedSource, NodeValuesAndZeroExtension) {
  const auto g = Grid1D::make(0.0, 1.0, 3);
  std::vector<Complex> v(9);
  for (std::size_t k = 0; k < 9; ++k) v[k] = Complex(double(k), -double(k));
  const auto t = tabulated_wavefunction(g, g, v);
  EXPECT_EQ(t(0.0, 1.0), v[1 * 3 + 2]);
  EXPECT_EQ(t(-1.0, -1.0), v[0]);
  EXPECT_EQ(t(1.5, 0.0), Complex(0.0));
  EXPECT_EQ(t(0.0, -1.01), Complex(0.0));
  EXPECT_FALSE(t.norm_certified());
}

TEST(TabulatedSource, RejectsDimensionMismatch) {
  const auto g = Grid1D::make(0.0, 1.0, 3);
  EXPECT_EQ(code_of([&] { tabulated_wavefunction(g, g, std::vector<Complex>(8)); }), ErrorCode::InvalidArgument);
}

TEST(TabulatedSource, LoadsRowMajorCsv) {
  oracle::TempDir dir;
  std::ostringstream os;
  os << "x_mm,xp_mm,re,im\n";
  for (double x : {-1.0, 0.0, 1.0})
    for (double xp : {-2.0, 0.0, 2.0}) os << x << ',' << xp << ',' << x + xp << ',' << x * xp << '\n';
  const auto s = load_wavefunction_csv(dir.write("phi.csv", os.str()));
  EXPECT_EQ(s(1.0, -2.0), Complex(-1.0, -2.0));
  EXPECT_EQ(s(0.0, 2.0), Complex(2.0, 0.0));
}

TEST(TabulatedSource, CsvErrors) {
  oracle::TempDir dir;
  EXPECT_EQ(code_of([&] { load_wavefunction_csv(dir.path() / "missing.csv"); }), ErrorCode::Io);
  const auto bad_order = dir.write("order.csv", "0,0,1,0\n0,1,1,0\n1,1,1,0\n1,0,1,0\n");
  EXPECT_EQ(code_of([&] { load_wavefunction_csv(bad_order); }), ErrorCode::Parse);
  const auto uneven = dir.write("uneven.csv", "0,0,1,0\n0,1,1,0\n0,3,1,0\n1,0,1,0\n1,1,1,0\n1,3,1,0\n");
  EXPECT_EQ(code_of([&] { load_wavefunction_csv(uneven); }), ErrorCode::Parse);
  const auto text = dir.write("text.csv", "0,0,1,0\n0,1,abc,0\n");
  EXPECT_EQ(code_of([&] { load_wavefunction_csv(text); }), ErrorCode::Parse);
}
