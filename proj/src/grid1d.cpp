#include "sfem/grid1d.hpp"

namespace sfem {

namespace detail {

void apply_element_stencil(const ElementBlocks<double>& b, int n, int K, const double* nodal,
                           const double* interior, double* out_nodal, double* out_interior) {
  const int m = n - 1;
  out_nodal[0] = 0.0;
  out_nodal[K] = 0.0;
  for (int j = 1; j < K; ++j) {
    double s = b.cross * (nodal[j - 1] + nodal[j + 1]) + 2.0 * b.corner * nodal[j];
    const double* left = interior + static_cast<size_t>(j - 1) * m;   // element j
    const double* right = interior + static_cast<size_t>(j) * m;      // element j+1
    for (int i = 0; i < m; ++i) s += b.edge_rev[i] * left[i] + b.edge[i] * right[i];
    out_nodal[j] = s;
  }
  for (int j = 1; j <= K; ++j) {
    const double vl = nodal[j - 1], vr = nodal[j];
    const double* in = interior + static_cast<size_t>(j - 1) * m;
    double* out = out_interior + static_cast<size_t>(j - 1) * m;
    for (int i = 0; i < m; ++i) {
      double s = b.edge[i] * vl + b.edge_rev[i] * vr;
      for (int jj = 0; jj < m; ++jj) s += b.interior(i, jj) * in[jj];
      out[i] = s;
    }
  }
}

}  // namespace detail

GridFunction1D apply_mass_1d(const GridFunction1D& v, const ElementMatrices& em) {
  require(v.order == em.order, "apply_mass_1d: order mismatch");
  GridFunction1D y = GridFunction1D::zeros(v.order, v.elements);
  detail::apply_element_stencil(em.mass_blocks, v.order, v.elements, v.nodal.data(),
                                v.interior.data(), y.nodal.data(), y.interior.data());
  return y;
}

GridFunction1D apply_stiffness_1d(const GridFunction1D& v, const ElementMatrices& em) {
  require(v.order == em.order, "apply_stiffness_1d: order mismatch");
  GridFunction1D y = GridFunction1D::zeros(v.order, v.elements);
  detail::apply_element_stencil(em.stiff_blocks, v.order, v.elements, v.nodal.data(),
                                v.interior.data(), y.nodal.data(), y.interior.data());
  return y;
}

}  // namespace sfem
