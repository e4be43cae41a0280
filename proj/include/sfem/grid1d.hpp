#pragma once

#include <vector>

#include "sfem/element.hpp"
#include "sfem/types.hpp"

namespace sfem {

/// A 1D FEM grid function: nodal values at the K+1 mesh nodes (both boundary
/// entries pinned to zero) and n-1 interior values per element, stored
/// element-major.
struct GridFunction1D {
  int order = 0;     // n
  int elements = 0;  // K
  std::vector<double> nodal;     // size K+1
  std::vector<double> interior;  // size K*(n-1)

  static GridFunction1D zeros(int n, int K) {
    GridFunction1D g;
    g.order = n;
    g.elements = K;
    g.nodal.assign(K + 1, 0.0);
    g.interior.assign(static_cast<size_t>(K) * (n - 1), 0.0);
    return g;
  }

  double* interior_at(int element0) { return interior.data() + static_cast<size_t>(element0) * (order - 1); }
  const double* interior_at(int element0) const {
    return interior.data() + static_cast<size_t>(element0) * (order - 1);
  }
  int dof_count() const { return order * elements - 1; }
  void enforce_boundary() {
    if (!nodal.empty()) {
      nodal.front() = 0.0;
      nodal.back() = 0.0;
    }
  }
};

/// Expansion coefficients in the 1D eigenvector basis, frequency-major:
/// first the n-1 zero-frequency entries, then n entries per frequency
/// k = 1..K-1.
struct CoefficientArray1D {
  int order = 0;
  int elements = 0;
  std::vector<double> data;  // size n*K - 1

  static CoefficientArray1D zeros(int n, int K) {
    CoefficientArray1D c;
    c.order = n;
    c.elements = K;
    c.data.assign(static_cast<size_t>(n) * K - 1, 0.0);
    return c;
  }

  // k = 0 carries l = 1..n-1, k >= 1 carries l = 1..n.
  int index(int k, int l) const { return k == 0 ? l - 1 : (order - 1) + (k - 1) * order + (l - 1); }
  double& at(int k, int l) { return data[index(k, l)]; }
  double at(int k, int l) const { return data[index(k, l)]; }
};

/// Action of the assembled (unscaled) mass operator through its element
/// stencil: nodes couple to both adjacent elements, interior values only to
/// their own element's nodes.
GridFunction1D apply_mass_1d(const GridFunction1D& v, const ElementMatrices& em);

/// Same for the assembled stiffness operator.
GridFunction1D apply_stiffness_1d(const GridFunction1D& v, const ElementMatrices& em);

namespace detail {
// Shared stencil core; `b` selects the stiffness or mass blocks.
void apply_element_stencil(const ElementBlocks<double>& b, int n, int K, const double* nodal,
                           const double* interior, double* out_nodal, double* out_interior);
}  // namespace detail

}  // namespace sfem
