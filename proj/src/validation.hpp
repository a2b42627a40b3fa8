#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "correlator.hpp"

namespace ghostsim {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Randomized, norm-certified setup plus an evaluation point. Index
/// selects the family: Gaussian sources against double-slit or Gaussian
/// objects and rect or Gaussian pupils, and tabulated sources built from
/// conj(h_t h_r) (Cauchy-Schwarz equality) optionally mixed with a Gaussian.
struct RandomCase {
  CorrelatorSetup setup;
  double x_t = 0.0;
  double x_r = 0.0;
  std::string description;
};

RandomCase random_cauchy_schwarz_case(std::mt19937_64& rng, std::size_t index);

struct CauchySchwarzOutcome {
  bool passed = false;
  double radicand = 0.0;
  double scale = 0.0;
  double bound_ratio = 0.0;  // g2 / (i_t i_r)
  std::string error;
};

/// Radicand >= -kNoiseClampWindow * scale and g2 <= i_t i_r (1 + 1e-9).
CauchySchwarzOutcome check_cauchy_schwarz(const RandomCase& c);

/// The built-in oracle suite behind the `validate` command.
std::vector<CheckResult> run_validation_suite(std::size_t random_setups = 20, std::uint64_t seed = 20240601);

}  // namespace ghostsim
