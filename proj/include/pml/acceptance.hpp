#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pml {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

// The ten acceptance criteria; one result per criterion, in order.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed = 1234);

// Prints "PASS"/"FAIL" lines to stdout; returns the number of failures.
int report_acceptance(const std::vector<CriterionResult>& results);

}  // namespace pml
