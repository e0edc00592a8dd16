#include <cstdlib>

#include "pml/acceptance.hpp"
#include "pml/harness.hpp"

int main() {
  const auto results = pml::run_acceptance(pml::resolve_seed(std::nullopt));
  return pml::report_acceptance(results) == 0 ? 0 : 1;
}
