#include <gtest/gtest.h>

#include "analytic.hpp"
#include "oracles.hpp"
#include "source.hpp"
#include "validation.hpp"

using namespace ghostsim;

TEST(Analytic, NormConstantMatchesIndependentForm) {
  for (double a : {0.5, 1.0, 2.0, 5.0})
    for (double b : {0.01, 0.05, 0.3, 1.0})
      EXPECT_LT(oracle::rel(analytic::gaussian_source_norm_constant(a, b), oracle::gaussian_norm_constant(a, b)), 1e-14);
  EXPECT_NEAR(analytic::gaussian_source_norm_constant(2.0, 0.05), 3.00076, 1e-5);
}

TEST(Analytic, ArmEnergies) {
  EXPECT_NEAR(analytic::double_slit_fourier_energy(0.05, 6.5e-4, 100.0), 23.6686, 1e-4);
  EXPECT_NEAR(analytic::rect_two_f_energy(10.0, 6.5e-4, 100.0), 10.0 / (8.0 * std::pow(0.065, 3)), 1e-9);
}

TEST(Analytic, AllGaussianAgreesWithTwoDimensionalForm) {
  const analytic::AllGaussianToy t{1.3, 0.15, 2.0, 0.4, 0.7, 5e-4, 120.0};
  const oracle::Toy o{t.a_mm, t.b_mm, t.c_norm, t.object_w_mm, t.pupil_sigma_mm, t.lambda_mm, t.f_mm};
  for (double x_t : {0.0, 0.03, -0.1})
    for (double x_r : {-0.7, 0.0, 0.2})
      EXPECT_LT(oracle::rel(analytic::all_gaussian_amplitude(t, x_t, x_r), oracle::all_gaussian_amplitude(o, x_t, x_r)),
                1e-12);
}

TEST(ValidationSuite, AllChecksPass) {
  const auto results = run_validation_suite();
  ASSERT_EQ(results.size(), 5u);
  for (const auto& r : results) EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
}

TEST(ValidationSuite, NormalizationFaultIsCaught) {
  detail::set_normalization_fault(2.0);
  const auto results = run_validation_suite();
  detail::set_normalization_fault(1.0);
  bool cs_failed = false;
  for (const auto& r : results)
    if (r.name.find("cauchy-schwarz") != std::string::npos) cs_failed = !r.passed;
  EXPECT_TRUE(cs_failed);
}

TEST(RandomCases, CoverAllFamilies) {
  std::mt19937_64 rng(3);
  int tabulated = 0, gaussian = 0;
  for (std::size_t k = 0; k < 10; ++k) {
    const auto c = random_cauchy_schwarz_case(rng, k);
    EXPECT_TRUE(c.setup.state.norm_certified());
    (c.setup.state.kind() == SourceKind::Tabulated ? tabulated : gaussian)++;
  }
  EXPECT_EQ(tabulated, 4);
  EXPECT_EQ(gaussian, 6);
}
