#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "stablecos/harness.hpp"

namespace stablecos {

/// Directory holding the bundled reference tables (compile-time default).
std::filesystem::path default_data_dir();

struct GoldenCell {
  std::string model;
  double strike;
  PricingMethod method;
  double price;
};

/// Reads `model,strike,method,price` rows; `#` lines are comments.
std::vector<GoldenCell> load_strike_table_golden(const std::filesystem::path& path);

/// Reads `model,price` rows into a ReferenceSet.
ReferenceSet load_reference_set(const std::filesystem::path& path);

struct GoldenMismatch {
  GoldenCell cell;
  double computed;
};

struct GoldenTally {
  int checked = 0;
  int passed = 0;
  double max_abs_error = 0.0;
  std::vector<GoldenMismatch> failures;
};

/// Compares every golden cell whose (model, strike, method) is present in
/// `result` and flagged ok; tallies per method.
std::map<PricingMethod, GoldenTally> compare_with_golden(const ExperimentResult& result,
                                                         const std::vector<GoldenCell>& golden,
                                                         double tolerance);

}  // namespace stablecos
