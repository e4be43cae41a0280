#pragma once

// Flat key=value config files for the solve command. Lines are
// `key = value`, `#` starts a comment, values may hold space-separated
// lists. Parse errors carry the file name and line number.

#include <map>
#include <string>
#include <vector>

#include "sfem/poisson.hpp"

namespace sfem {

struct SolveConfig {
  int version = 1;
  int dimension = 0;
  std::vector<double> lengths;
  std::vector<int> elements;
  std::vector<int> orders;
  double shift = 0;
  std::string case_name;   // one of the built-in manufactured cases
  char algorithm = 'a';    // 'a' or 'b'
  int threads = 0;
  Precision precision = Precision::Double;
  std::string table_cache;      // directory; empty = no cache
  bool write_tables = false;
  std::string solution_out;     // empty = no dump
  std::string report_out;
  bool residual = false;
};

SolveConfig parse_solve_config(const std::string& path);

/// Problem built from the config (case name resolved, lists broadcast).
ProblemSpec problem_from_config(const SolveConfig& cfg);

}  // namespace sfem
