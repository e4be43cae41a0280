#pragma once

// Self-verification suites behind `sfem verify`: invariants checked against
// the brute-force oracles. Quick keeps to small sizes; full covers the whole
// supported order range.

#include <string>
#include <vector>

#include "sfem/types.hpp"

namespace sfem::verify {

enum class Level { Quick, Full };

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // worst deviation or failure description
};

std::vector<CheckResult> run_suite(Level level);

/// Invariant checks on a table cache file: record counts, norm identity,
/// eigen-residuals of materialized eigenvectors, pole interlacing, and (for
/// small sizes) agreement with the dense pencil.
std::vector<CheckResult> check_table_file(const std::string& path, int order, int elements);

}  // namespace sfem::verify
