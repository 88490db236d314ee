#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "krein/io.hpp"

namespace krein::verify {

struct Check {
  std::string suite;
  std::string name;
  bool passed = false;
  /// Measured quantity and the bound it was held to.
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// measures, cauchy, rank_one, spectral_shift, anderson.
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". All randomness is drawn from
/// seed, so the result is a pure function of (suite, seed).
std::vector<Check> run_suite(const std::string& suite, std::uint64_t seed);

/// {suite, seed, passed, failed, checks: [...]}
io::json to_json(const std::vector<Check>& checks, const std::string& suite, std::uint64_t seed);

}  // namespace krein::verify
