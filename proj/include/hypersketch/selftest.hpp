#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace hypersketch {

struct SelftestResult {
  std::string name;
  bool passed = true;
  std::size_t trials = 0;
  std::string detail;
};

// Randomized property checks over every module at small sizes.
std::vector<SelftestResult> run_selftest(std::size_t trials, std::uint64_t seed);

}  // namespace hypersketch
