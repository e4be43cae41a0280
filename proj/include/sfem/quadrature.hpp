#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "sfem/types.hpp"

namespace sfem {

template <class Real>
struct QuadratureRule {
  std::vector<Real> nodes;    // ascending on [-1,1], exactly mirror-symmetric
  std::vector<Real> weights;  // positive, symmetric
};

namespace detail {
template <class Real>
inline void legendre_eval(int m, const Real& x, Real& p, Real& dp) {
  Real p0(1), p1 = x;
  if (m == 0) {
    p = p0;
    dp = Real(0);
    return;
  }
  for (int k = 2; k <= m; ++k) {
    const Real pk = (Real(2 * k - 1) * x * p1 - Real(k - 1) * p0) / Real(k);
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  dp = Real(m) * (x * p1 - p0) / (x * x - Real(1));
}
}  // namespace detail

/// Gauss-Legendre rule with `m` points on [-1,1], exact through degree 2m-1.
/// Only half the nodes are solved for; the rest are mirrored so the rule is
/// symmetric bit for bit.
template <class Real>
QuadratureRule<Real> gauss_legendre(int m) {
  using std::abs;
  using std::cos;
  require(m >= 1, "gauss_legendre: need at least one point");
  QuadratureRule<Real> rule;
  rule.nodes.assign(m, Real(0));
  rule.weights.assign(m, Real(0));

  const Real eps = std::numeric_limits<Real>::epsilon();
  const int half = m / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess, refined by Newton on P_m.
    Real x(std::cos(M_PI * (i + 0.75) / (m + 0.5)));
    Real p, dp;
    for (int it = 0; it < 200; ++it) {
      detail::legendre_eval(m, x, p, dp);
      const Real dx = p / dp;
      x -= dx;
      if (abs(dx) <= Real(2) * eps * (Real(1) + abs(x))) break;
    }
    detail::legendre_eval(m, x, p, dp);
    const Real w = Real(2) / ((Real(1) - x * x) * dp * dp);
    rule.nodes[m - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.weights[m - 1 - i] = w;
  }
  if (m % 2 == 1) {
    Real p, dp;
    detail::legendre_eval(m, Real(0), p, dp);
    rule.nodes[half] = Real(0);
    rule.weights[half] = Real(2) / (dp * dp);
  }
  return rule;
}

}  // namespace sfem
