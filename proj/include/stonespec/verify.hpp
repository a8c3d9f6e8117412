#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stonespec/json_io.hpp"
#include "stonespec/parallel.hpp"

namespace stonespec {

struct SuiteConfig {
  AlgebraShape shape{3, 3};
  std::uint64_t seed = 0;
  int trials = 200;
  double tol = kTol;
  ExecMode mode = ExecMode::serial;
};

struct PropertyResult {
  std::string name;
  int pass = 0;
  int fail = 0;
  std::vector<Json> counterexamples;  // at most three kept, re-checkable
  bool ok() const { return fail == 0; }
};

struct SuiteReport {
  std::string suite;
  std::vector<PropertyResult> properties;
  bool ok() const;
  int passes() const;
  int failures() const;
};

/// The available suites, in the deterministic order reports use.
const std::vector<std::string>& suite_names();

/// Runs one suite. All randomness flows from config.seed through named
/// streams (suite, then property, then trial), so results do not depend on
/// execution order. Throws BadInput for an unknown suite name.
SuiteReport run_suite(const std::string& name, const SuiteConfig& config);

Json report_json(const std::vector<SuiteReport>& reports,
                 const SuiteConfig& config);

}  // namespace stonespec
