#pragma once

// User-facing solvers for  -Laplace(u) + alpha*u = f  on a rectangular box
// with zero Dirichlet data, discretized by tensor-product Lagrange elements.
//
// Two algorithms:
//   FullDiagonalization  - eigen-expansion along every axis, divide by the
//                          separable symbol, synthesize back.
//   PartialDiagonalization - eigen-expansion along axes 2..N only; one SPD
//                          banded solve along axis 1 per transformed
//                          frequency.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfem/ndgrid.hpp"
#include "sfem/spectral.hpp"
#include "sfem/types.hpp"

namespace sfem {

using ScalarField = std::function<double(std::span<const double>)>;

struct ProblemSpec {
  int dimension = 0;
  std::vector<double> lengths;   // X_i > 0
  std::vector<int> elements;     // K_i >= 2
  std::vector<int> orders;       // n_i >= 1
  double shift = 0;              // alpha, must exceed -pi^2 * sum X_i^-2
  ScalarField rhs;
  ScalarField exact;             // optional, enables error reporting

  std::vector<AxisSpec> axis_specs() const;
  void validate() const;
  double shift_lower_bound() const;  // -pi^2 * sum X_i^-2
};

enum class Algorithm { FullDiagonalization, PartialDiagonalization };

/// Spectral tables keyed by (order, elements), built on demand. With a cache
/// directory set, tables are loaded from / saved to files named
/// sfem_table_n<order>_K<elements>.txt.
class TableSet {
 public:
  explicit TableSet(Precision prec = Precision::Double, std::string cache_dir = {},
                    bool write_cache = false)
      : precision_(prec), cache_dir_(std::move(cache_dir)), write_cache_(write_cache) {}

  const SpectralTable1D& get(int order, int elements);
  Precision precision() const { return precision_; }

 private:
  Precision precision_;
  std::string cache_dir_;
  bool write_cache_;
  std::map<std::pair<int, int>, std::unique_ptr<SpectralTable1D>> tables_;
};

struct SolveOptions {
  Algorithm algorithm = Algorithm::FullDiagonalization;
  int threads = 0;               // 0 = library default
  bool compute_residual = false;
  Precision table_precision = Precision::Double;
  TableSet* tables = nullptr;    // optional shared table set
};

struct SolveReport {
  GridFunctionND solution;
  double seconds_solve = 0;      // transform + scale + synthesis (+ banded solves)
  double seconds_load = 0;       // fem_load_average time, when done internally
  std::optional<double> residual_rel;
  std::optional<double> error_uniform;
};

/// FEM average of the right-hand side: inner products with every basis
/// function by per-element Gauss quadrature with order+1 points per axis,
/// scaled to match the h-free operator convention.
GridFunctionND fem_load_average(const ProblemSpec& spec);

/// Full solve: load averaging, transforms, reporting.
SolveReport solve(const ProblemSpec& spec, const SolveOptions& options = {});

/// Core solve on a precomputed load vector (this is the part benchmarks
/// time). Tables must come from `tables`.
SolveReport solve_with_load(const ProblemSpec& spec, const GridFunctionND& load, TableSet& tables,
                            const SolveOptions& options = {});

/// Left-hand-side operator applied through 1D element stencil sweeps.
GridFunctionND apply_operator(const ProblemSpec& spec, const GridFunctionND& v);

namespace detail {
// Denominator check lives apart so the failure path is testable directly.
void scale_by_symbol(std::vector<double>& coeffs, const TensorShape& shape,
                     const std::vector<std::vector<double>>& axis_eigenvalues,
                     const std::vector<double>& axis_factors, double shift,
                     std::span<const int> orders);
}  // namespace detail

}  // namespace sfem
