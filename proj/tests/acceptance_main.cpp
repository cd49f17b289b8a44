// Acceptance gate: one line per criterion, nonzero exit if any criterion fails.
//
//   aoi_acceptance [--quick] [--verbose] [id ...]

#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "aoi/validation/acceptance.hpp"

int main(int argc, char** argv) {
  aoi::validation::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) {
      options.quick = true;
    } else if (std::strcmp(argv[i], "--verbose") == 0) {
      options.log = &std::cerr;
    } else {
      options.only.emplace_back(argv[i]);
    }
  }
  std::vector<aoi::validation::CheckResult> results;
  try {
    results = aoi::validation::run_acceptance(options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  for (const auto& r : results) std::cout << aoi::validation::format_check(r) << '\n';
  return aoi::validation::all_passed(results) ? 0 : 1;
}
