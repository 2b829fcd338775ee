#pragma once

// Property suites run by `rtor check`. Each property reports how many trials
// passed and the worst residual seen.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rtor {

struct PropertyResult {
  std::string name;
  int passed = 0;
  int trials = 0;
  double worst = 0.0;
  double tolerance = 0.0;

  bool ok() const { return trials > 0 && passed == trials; }
};

struct SuiteResult {
  std::string suite;
  std::vector<PropertyResult> properties;

  bool ok() const;
};

struct RandomCase {
  int n = 1;
  std::vector<std::size_t> dims;
  std::uint64_t seed = 0;
};

/// Random (n, dims, seed) triples with n in {1, 3} and even dimension at most 40.
std::vector<RandomCase> random_population(std::uint64_t seed, int trials);

const std::vector<std::string>& suite_names();

/// Throws Usage for an unknown suite name. `tolerance` replaces every
/// property's default tolerance when given.
SuiteResult run_suite(const std::string& name, std::uint64_t seed, int trials,
                      std::optional<double> tolerance = std::nullopt);

}  // namespace rtor
