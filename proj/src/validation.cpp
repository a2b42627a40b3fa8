#include "validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "analytic.hpp"
#include "error.hpp"

namespace ghostsim {

namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Nodes so that the step resolves the entanglement width b.
std::int64_t nodes_for(double half_width, double b) {
  const auto n = static_cast<std::int64_t>(std::ceil(2.0 * half_width / (b / 3.0))) + 1;
  return std::clamp<std::int64_t>(n, 257, 2049);
}

RandomCase gaussian_case(std::mt19937_64& rng, int family) {
  const double a = uniform(rng, 0.5, 2.0);
  const double b = uniform(rng, 0.05, 0.5);
  const double lambda = uniform(rng, 4e-4, 8e-4);
  const double f = uniform(rng, 50.0, 200.0);
  const double lambda_r = uniform(rng, 4e-4, 8e-4);
  const double f_r = uniform(rng, 50.0, 200.0);

  std::string obj_desc;
  Transmission object = [&] {
    if (family == 0) {
      const double w = uniform(rng, 0.02, 0.2);
      const double d = uniform(rng, w + 0.05, 2.0);
      obj_desc = fmt("double slit w=%.4g d=%.4g", w, d);
      return double_slit(w, d);
    }
    const double w = uniform(rng, 0.1, 1.0);
    obj_desc = fmt("gaussian object w=%.4g", w);
    return gaussian_transmission(w);
  }();
  Pupil pupil = family == 1 ? gaussian_pupil(uniform(rng, 0.2, 2.0)) : rect_pupil(uniform(rng, 1.0, 10.0));

  const auto n = nodes_for(4.0 * a, b);
  const auto cert = default_certification_grids(a, n, n);
  RandomCase c{
      CorrelatorSetup{normalize(gaussian_wavefunction(a, b), cert.gx, cert.gxp), fourier_arm(lambda, f, object),
                      two_f_arm(lambda_r, f_r, pupil), cert.gx, cert.gxp},
      uniform(rng, -0.5, 0.5), uniform(rng, -1.0, 1.0), ""};
  c.description = fmt("gaussian source a=%.4g b=%.4g, ", a, b) + obj_desc +
                  (pupil.kind() == PupilKind::Rect ? fmt(", rect pupil D=%.4g", pupil.size())
                                                   : fmt(", gaussian pupil sigma=%.4g", pupil.size()));
  return c;
}

// phi = conj(h_t(x_t, x) h_r(x_r, x')) + eps * peak * gaussian, tabulated on
// the correlator grids so the discrete Cauchy-Schwarz bound is (nearly) tight.
RandomCase equality_case(std::mt19937_64& rng, double eps) {
  const double lambda = uniform(rng, 4e-4, 8e-4);
  const double f = uniform(rng, 50.0, 200.0);
  const double w = uniform(rng, 0.2, 0.8);
  const double sigma = uniform(rng, 0.5, 2.0);
  const double x_t = uniform(rng, -0.5, 0.5);
  const double x_r = uniform(rng, -1.0, 1.0);

  const Grid1D g = Grid1D::make(0.0, 3.0, 601);
  ImpulseResponse ht = fourier_arm(lambda, f, gaussian_transmission(w));
  ImpulseResponse hr = two_f_arm(lambda, f, gaussian_pupil(sigma));

  std::vector<Complex> values(g.size() * g.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Complex a = ht(x_t, g.sample(i));
    for (std::size_t j = 0; j < g.size(); ++j) {
      values[i * g.size() + j] = std::conj(a * hr(x_r, g.sample(j)));
      peak = std::max(peak, std::abs(values[i * g.size() + j]));
    }
  }
  if (eps > 0.0) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.sample(i);
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double xp = g.sample(j);
        values[i * g.size() + j] += eps * peak * std::exp(-(x * x + xp * xp) / 0.25 - (x - xp) * (x - xp) / 0.04);
      }
    }
  }
  TwoPhotonState state = normalize(tabulated_wavefunction(g, g, std::move(values)), g, g);
  RandomCase c{CorrelatorSetup{std::move(state), std::move(ht), std::move(hr), g, g}, x_t, x_r, ""};
  c.description = fmt("tabulated conj(h_t h_r) + %.3g gaussian, w=%.4g sigma=%.4g", eps, w, sigma);
  return c;
}

}  // namespace

RandomCase random_cauchy_schwarz_case(std::mt19937_64& rng, std::size_t index) {
  switch (index % 5) {
    case 3:
      return equality_case(rng, 0.0);
    case 4:
      return equality_case(rng, uniform(rng, 0.01, 0.3));
    default:
      return gaussian_case(rng, static_cast<int>(index % 5));
  }
}

CauchySchwarzOutcome check_cauchy_schwarz(const RandomCase& c) {
  CauchySchwarzOutcome out;
  try {
    const Correlator corr(c.setup);
    const double g2 = corr.coincidence_rate(c.x_t, c.x_r);
    const double i_t = corr.test_arm_energy(c.x_t);
    const double i_r = corr.reference_arm_energy(c.x_r);
    const double sm = second_moment_from(g2, i_t, i_r);
    out.radicand = sm - g2 * g2;
    out.scale = sm + g2 * g2;
    out.bound_ratio = i_t * i_r > 0.0 ? g2 / (i_t * i_r) : 0.0;
    out.passed = out.radicand >= -kNoiseClampWindow * out.scale && g2 <= i_t * i_r * (1.0 + 1e-9);
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

std::vector<CheckResult> run_validation_suite(std::size_t random_setups, std::uint64_t seed) {
  std::vector<CheckResult> results;
  auto guarded = [&](const std::string& name, auto&& body) {
    CheckResult r{name, false, ""};
    try {
      body(r);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    results.push_back(std::move(r));
  };

  guarded("gaussian normalization constant", [](CheckResult& r) {
    const double cases[][2] = {{2.0, 0.05}, {1.0, 0.2}, {0.7, 1.0}, {1.5, 0.3}};
    double worst = 0.0;
    for (const auto& ab : cases) {
      const double a = ab[0], b = ab[1];
      const auto n = static_cast<std::int64_t>(std::ceil(8.0 * a / (b / 4.0))) + 1;
      const auto cert = default_certification_grids(a, n, n);
      const double got = normalize(gaussian_wavefunction(a, b), cert.gx, cert.gxp).scale();
      worst = std::max(worst, rel_err(got, analytic::gaussian_source_norm_constant(a, b)));
    }
    r.passed = worst <= 1e-6;
    r.detail = fmt("max relative error %.3e (tolerance 1e-6)", worst);
  });

  guarded("double-slit test-arm energy", [](CheckResult& r) {
    const double lambda = 6.5e-4, f = 100.0, w = 0.05, d = 1.0;
    const Grid1D g = Grid1D::make(0.0, 2.0, 4097);
    const auto h = fourier_arm(lambda, f, double_slit(w, d));
    double worst = 0.0;
    for (double x_t : {0.0, 0.37, -1.2}) {
      worst = std::max(worst, rel_err(arm_energy(h, x_t, g).value, analytic::double_slit_fourier_energy(w, lambda, f)));
    }
    r.passed = worst <= 1e-6;
    r.detail = fmt("max relative error %.3e (tolerance 1e-6)", worst);
  });

  guarded("rect-pupil reference-arm energy", [](CheckResult& r) {
    const double lambda = 6.5e-4, f = 100.0;
    const Grid1D g = Grid1D::make(0.0, 200.0, 80001);
    double worst = 0.0, lo = INFINITY, hi = 0.0;
    for (double D : {2.0, 4.0, 6.0, 8.0, 10.0}) {
      const double e = arm_energy(two_f_arm(lambda, f, rect_pupil(D)), 0.0, g).value;
      worst = std::max(worst, rel_err(e, analytic::rect_two_f_energy(D, lambda, f)));
      lo = std::min(lo, e / D);
      hi = std::max(hi, e / D);
    }
    const double spread = (hi - lo) / hi;
    r.passed = worst <= 1e-4 && spread <= 1e-4;
    r.detail = fmt("max relative error %.3e, energy/D spread %.3e (tolerance 1e-4)", worst, spread);
  });

  guarded("all-gaussian amplitude", [](CheckResult& r) {
    const double a = 1.0, b = 0.2, w = 0.3, sigma = 1.0, lambda = 6.5e-4, f = 100.0;
    const Grid1D gx = Grid1D::make(0.0, 4.0 * a, 513);
    const Grid1D gxp = Grid1D::make(0.0, 4.0 * a, 2049);
    const Correlator corr(CorrelatorSetup{normalize(gaussian_wavefunction(a, b), gx, gxp),
                                          fourier_arm(lambda, f, gaussian_transmission(w)),
                                          two_f_arm(lambda, f, gaussian_pupil(sigma)), gx, gxp});
    const analytic::AllGaussianToy toy{a, b, analytic::gaussian_source_norm_constant(a, b), w, sigma, lambda, f};
    const double x_t = 0.01;
    double worst = 0.0;
    for (int k = 0; k <= 20; ++k) {
      const double x_r = -0.5 + 0.05 * k;
      const double want = std::norm(analytic::all_gaussian_amplitude(toy, x_t, x_r));
      worst = std::max(worst, rel_err(corr.coincidence_rate(x_t, x_r), want));
    }
    r.passed = worst <= 1e-6;
    r.detail = fmt("max relative G2 error over 21 points %.3e (tolerance 1e-6)", worst);
  });

  guarded("cauchy-schwarz on random setups", [&](CheckResult& r) {
    std::mt19937_64 rng(seed);
    std::size_t failures = 0;
    double worst = 0.0;
    std::string first;
    for (std::size_t k = 0; k < random_setups; ++k) {
      const RandomCase c = random_cauchy_schwarz_case(rng, k);
      const auto o = check_cauchy_schwarz(c);
      worst = std::max(worst, o.bound_ratio);
      if (!o.passed) {
        if (failures++ == 0) {
          first = c.description + (o.error.empty() ? fmt(": radicand %.3e, scale %.3e", o.radicand, o.scale)
                                                   : ": " + o.error);
        }
      }
    }
    r.passed = failures == 0;
    r.detail = std::to_string(failures) + " of " + std::to_string(random_setups) + " setups failed" +
               fmt(", max G2/(I_t I_r) %.12f", worst) + (first.empty() ? "" : "; first: " + first);
  });

  return results;
}

}  // namespace ghostsim
