// Acceptance gate: runs the full oracle/invariant suite and prints one
// PASS/FAIL line per criterion. Exit status is nonzero when any check fails.
//
// Flags:
//   --quick                reduced trial counts (smoke run)
//   --seed N               base seed (default 20240817)
//   --mnist-images PATH    optional user-supplied data for the 10-class check
//   --mnist-labels PATH
//   --usps-csv PATH

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

#include "tvcut/verify.hpp"

int main(int argc, char** argv) {
  tvcut::VerifyOptions options;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    auto next = [&]() -> std::string {
      if (i + 1 >= argc) {
        std::cerr << "missing value for " << arg << "\n";
        std::exit(2);
      }
      return argv[++i];
    };
    if (arg == "--quick") {
      options.quick = true;
    } else if (arg == "--seed") {
      options.seed = std::strtoull(next().c_str(), nullptr, 10);
    } else if (arg == "--mnist-images") {
      options.mnist_images = next();
    } else if (arg == "--mnist-labels") {
      options.mnist_labels = next();
    } else if (arg == "--usps-csv") {
      options.usps_csv = next();
    } else {
      std::cerr << "unknown flag: " << arg << "\n";
      return 2;
    }
  }

  auto results = tvcut::run_verification(options, &std::cout);

  int failed = 0;
  for (const auto& r : results)
    if (!r.passed) ++failed;
  std::cout << "\n"
            << (results.size() - failed) << "/" << results.size()
            << " checks passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
