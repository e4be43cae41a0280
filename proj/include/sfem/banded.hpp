#pragma once

// Symmetric positive definite band matrices in lower band storage:
// entry(i+d, i) lives at band[d*dim + i], 0 <= d <= bandwidth.

#include <vector>

#include "sfem/element.hpp"
#include "sfem/types.hpp"

namespace sfem {

struct BandMatrix {
  int dim = 0;
  int bandwidth = 0;
  std::vector<double> band;  // (bandwidth+1) x dim

  static BandMatrix zeros(int dim, int bandwidth) {
    BandMatrix m;
    m.dim = dim;
    m.bandwidth = bandwidth;
    m.band.assign(static_cast<size_t>(bandwidth + 1) * dim, 0.0);
    return m;
  }

  double& at(int d, int i) { return band[static_cast<size_t>(d) * dim + i]; }
  double at(int d, int i) const { return band[static_cast<size_t>(d) * dim + i]; }
};

/// Assembled 1D operator in band storage over the element-major interleaved
/// ordering (interior values of element 1, node 1, interior of element 2, ...).
/// Bandwidth equals the order. `blocks` selects stiffness or mass.
BandMatrix assemble_band_1d(const ElementBlocks<double>& blocks, int order, int elements);

/// In-place banded Cholesky; throws on a nonpositive pivot (indefinite input).
void band_cholesky(BandMatrix& m);

/// Solve with a factored matrix, x overwritten.
void band_solve(const BandMatrix& chol, double* x);

/// Map between the interleaved dof line and the (nodal, interior) pair of a
/// grid line. Nodal spans K+1 entries with boundaries, interior K*(n-1).
void gather_dof_line(int order, int elements, const double* nodal, std::int64_t nodal_stride,
                     const double* interior, std::int64_t interior_stride, double* dof);
void scatter_dof_line(int order, int elements, const double* dof, double* nodal,
                      std::int64_t nodal_stride, double* interior, std::int64_t interior_stride);

}  // namespace sfem
