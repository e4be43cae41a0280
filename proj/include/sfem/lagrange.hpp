#pragma once

#include <vector>

#include "sfem/types.hpp"

namespace sfem {

/// Equispaced interpolation nodes -1 + 2k/n on the reference interval,
/// computed as (2k-n)/n so mirrored nodes are exact negatives.
template <class Real>
std::vector<Real> equispaced_nodes(int n) {
  require(n >= 1, "equispaced_nodes: order must be positive");
  std::vector<Real> x(n + 1);
  for (int k = 0; k <= n; ++k) x[k] = Real(2 * k - n) / Real(n);
  return x;
}

/// Value of the Lagrange cardinal polynomial for node `l` at `x`.
template <class Real>
Real lagrange_value(const std::vector<Real>& nodes, int l, const Real& x) {
  Real v(1);
  for (size_t m = 0; m < nodes.size(); ++m) {
    if (static_cast<int>(m) == l) continue;
    v *= (x - nodes[m]) / (nodes[l] - nodes[m]);
  }
  return v;
}

/// Derivative of the cardinal polynomial, product-rule form. Stays finite
/// when `x` coincides with an interpolation node (Gauss points can do that).
template <class Real>
Real lagrange_derivative(const std::vector<Real>& nodes, int l, const Real& x) {
  Real sum(0);
  Real denom(1);
  for (size_t m = 0; m < nodes.size(); ++m) {
    if (static_cast<int>(m) == l) continue;
    denom *= nodes[l] - nodes[m];
    Real term(1);
    for (size_t r = 0; r < nodes.size(); ++r) {
      if (static_cast<int>(r) == l || r == m) continue;
      term *= x - nodes[r];
    }
    sum += term;
  }
  return sum / denom;
}

}  // namespace sfem
