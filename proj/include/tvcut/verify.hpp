#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tvcut {

struct CheckResult {
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  uint64_t seed = 20240817;
  double theta = 0.99;  // debug override; values >= 1 must make checks fail
  bool quick = false;   // reduced trial counts for fast smoke runs
  // Optional user-supplied datasets for the benchmark reproduction check.
  std::string mnist_images, mnist_labels;
  std::string usps_csv;
};

// Runs the full oracle/invariant suite; one result per criterion. Progress
// lines go to `progress` when non-null.
std::vector<CheckResult> run_verification(const VerifyOptions& options,
                                          std::ostream* progress = nullptr);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace tvcut
