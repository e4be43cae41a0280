#pragma once

// Fast expansion in the C-orthogonal eigenvector basis of the 1D operator
// pencil, and its inverse. Each call runs exactly `order` length-K sine or
// half-sample transforms:
//
//   synthesize           coefficients -> grid function
//   decompose            grid function -> its own expansion coefficients
//   decompose_weighted   y -> coefficients of y in the mass-weighted basis
//
// decompose(w) equals decompose_weighted(mass * w); the solver uses the
// weighted form on load vectors and synthesize on the way back.

#include <optional>
#include <vector>

#include "sfem/grid1d.hpp"
#include "sfem/spectral.hpp"
#include "sfem/trig.hpp"
#include "sfem/types.hpp"

namespace sfem {

/// Route for the direct (unweighted) decomposition: Spectral works on the
/// grid values with per-frequency weights; MassApply multiplies by the mass
/// operator first and then runs the weighted path. Both give the same
/// coefficients; MassApply exists for cross-checking.
enum class DirectRoute { Spectral, MassApply };

/// Scratch for one line transform; reusable across calls with the same
/// table, one instance per thread.
struct LineWork {
  std::vector<double> nodal;      // K-1
  std::vector<double> nodal_hat;  // K-1
  std::vector<double> fold;       // (n-1) slots x (K-1)
  std::vector<double> fold_hat;
  std::vector<double> dvec;       // (K-1) x (n-1), synthesis staging
  std::vector<double> half_in;    // K
  std::vector<double> half_out;   // (n-1) slots x K
  std::vector<double> center;     // n-1
  std::optional<trig::Plan> dst1, dst3, dct3;  // cached per length

  void resize_for(const SpectralTable1D& t);
};

namespace lines {
// Raw-buffer kernels used by the N-dimensional sweeps. `nodal` has K+1
// entries (boundary included), `interior` K*(n-1) element-major, `coeffs`
// n*K-1 in frequency-major order.
void decompose_weighted(const SpectralTable1D& t, const double* nodal, const double* interior,
                        double* coeffs, LineWork& work);
void decompose(const SpectralTable1D& t, const double* nodal, const double* interior, double* coeffs,
               LineWork& work);
void synthesize(const SpectralTable1D& t, const double* coeffs, double* nodal, double* interior,
                LineWork& work);

/// Scratch for the batched kernels below.
struct BlockWork {
  std::vector<double> nodal_hat, fold, fold_hat, dvec, half_in, half_out, center, tmp;
  std::optional<trig::Plan> dst1, dst3, dct3;
  int sized_elements = -1, sized_order = -1, sized_count = -1;

  void resize_for(const SpectralTable1D& t, int count);
};

// Batched variants over `count` lines in slot-major tiles: the value at
// position j of line b sits at [j*count + b]. Tiles are (K+1), K*(n-1) and
// (n*K-1) rows of `count` entries. Every transform runs once per slot for
// the whole block.
void decompose_weighted_block(const SpectralTable1D& t, const double* nodal, const double* interior,
                              double* coeffs, int count, BlockWork& work);
void synthesize_block(const SpectralTable1D& t, const double* coeffs, double* nodal, double* interior,
                      int count, BlockWork& work);
}  // namespace lines

GridFunction1D synthesize(const CoefficientArray1D& coeffs, const SpectralTable1D& table);
CoefficientArray1D decompose(const GridFunction1D& w, const SpectralTable1D& table,
                             DirectRoute route = DirectRoute::Spectral);
CoefficientArray1D decompose_weighted(const GridFunction1D& y, const SpectralTable1D& table);

}  // namespace sfem
