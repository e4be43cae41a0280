#pragma once

// Built-in manufactured problems, referenced by name from the CLI and tests.

#include <optional>
#include <string>
#include <vector>

#include "sfem/poisson.hpp"

namespace sfem {

struct ManufacturedCase {
  std::string name;
  int dimension = 0;
  ScalarField exact;      // empty when no closed-form solution is known
  ScalarField laplacian;  // Laplacian of the exact solution
};

/// Known cases: sin1d, poisson2d, poisson3d, constant1d/2d/3d.
const ManufacturedCase& manufactured_case(const std::string& name);
std::vector<std::string> manufactured_case_names();

/// Problem with rhs = -Laplacian(u) + shift*u on the unit box (or the given
/// lengths), exact solution attached when available.
ProblemSpec make_problem(const ManufacturedCase& c, double shift, std::vector<int> elements,
                         std::vector<int> orders, std::vector<double> lengths = {});

}  // namespace sfem
