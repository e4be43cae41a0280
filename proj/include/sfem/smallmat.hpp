#pragma once

// Minimal dense matrix kit for the element-level eigenwork. Dimensions here
// never exceed order+1 (<= 22), so plain O(n^3) routines templated on the
// scalar type cover both double and software multiprecision runs with the
// same code path. Large dense work (the test oracles) uses Eigen instead.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sfem/types.hpp"

namespace sfem {

template <class Real>
struct SmallMat {
  int rows = 0, cols = 0;
  std::vector<Real> a;

  SmallMat() = default;
  SmallMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, Real(0)) {}

  Real& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Real& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static SmallMat identity(int n) {
    SmallMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Real(1);
    return m;
  }
};

template <class Real>
SmallMat<Real> matmul(const SmallMat<Real>& x, const SmallMat<Real>& y) {
  SmallMat<Real> z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const Real xik = x(i, k);
      for (int j = 0; j < y.cols; ++j) z(i, j) += xik * y(k, j);
    }
  return z;
}

template <class Real>
SmallMat<Real> transpose(const SmallMat<Real>& x) {
  SmallMat<Real> z(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) z(j, i) = x(i, j);
  return z;
}

template <class Real>
std::vector<Real> matvec(const SmallMat<Real>& m, const std::vector<Real>& v) {
  std::vector<Real> y(m.rows, Real(0));
  for (int i = 0; i < m.rows; ++i) {
    Real s(0);
    for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
    y[i] = s;
  }
  return y;
}

template <class Real>
Real dot(const std::vector<Real>& x, const std::vector<Real>& y) {
  Real s(0);
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

/// In-place lower Cholesky; throws if the matrix is not positive definite.
template <class Real>
SmallMat<Real> cholesky_lower(const SmallMat<Real>& m) {
  using std::sqrt;
  const int n = m.rows;
  SmallMat<Real> l(n, n);
  for (int j = 0; j < n; ++j) {
    Real d = m(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > Real(0))) fail("cholesky: matrix not positive definite");
    l(j, j) = sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      Real s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

// Solve L x = b (forward) or L^T x = b (backward) for lower-triangular L.
template <class Real>
std::vector<Real> solve_lower(const SmallMat<Real>& l, std::vector<Real> b) {
  const int n = l.rows;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) b[i] -= l(i, k) * b[k];
    b[i] /= l(i, i);
  }
  return b;
}

template <class Real>
std::vector<Real> solve_lower_transposed(const SmallMat<Real>& l, std::vector<Real> b) {
  const int n = l.rows;
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) b[i] -= l(k, i) * b[k];
    b[i] /= l(i, i);
  }
  return b;
}

/// Cyclic Jacobi for a symmetric matrix. Eigenvectors come back as columns
/// of `vecs`, eigenvalues unsorted in `values`.
template <class Real>
void jacobi_eigensymm(SmallMat<Real> m, std::vector<Real>& values, SmallMat<Real>& vecs) {
  using std::abs;
  using std::sqrt;
  const int n = m.rows;
  vecs = SmallMat<Real>::identity(n);
  values.assign(n, Real(0));
  if (n == 0) return;

  const Real eps = std::numeric_limits<Real>::epsilon();
  for (int sweep = 0; sweep < 128; ++sweep) {
    Real off(0), diag(0);
    for (int i = 0; i < n; ++i) {
      diag += abs(m(i, i));
      for (int j = i + 1; j < n; ++j) off += abs(m(i, j));
    }
    if (!(off > eps * (diag + off))) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Real apq = m(p, q);
        if (abs(apq) <= eps * eps * (abs(m(p, p)) + abs(m(q, q)))) continue;
        const Real tau = (m(q, q) - m(p, p)) / (Real(2) * apq);
        Real t;
        if (tau >= Real(0))
          t = Real(1) / (tau + sqrt(Real(1) + tau * tau));
        else
          t = Real(-1) / (-tau + sqrt(Real(1) + tau * tau));
        const Real c = Real(1) / sqrt(Real(1) + t * t);
        const Real s = t * c;
        for (int k = 0; k < n; ++k) {
          const Real mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          const Real mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        for (int k = 0; k < n; ++k) {
          const Real vkp = vecs(k, p), vkq = vecs(k, q);
          vecs(k, p) = c * vkp - s * vkq;
          vecs(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) values[i] = m(i, i);
}

/// Generalized symmetric eigenproblem A x = lambda B x with B positive
/// definite, reduced through the Cholesky factor of B. Eigenvalues come back
/// ascending; eigenvectors (columns) are B-orthonormal.
template <class Real>
void pencil_eigensymm(const SmallMat<Real>& a, const SmallMat<Real>& b, std::vector<Real>& values,
                      SmallMat<Real>& vecs) {
  const int n = a.rows;
  values.assign(n, Real(0));
  vecs = SmallMat<Real>(n, n);
  if (n == 0) return;

  const SmallMat<Real> l = cholesky_lower(b);
  // M = L^{-1} A L^{-T}, formed column by column.
  SmallMat<Real> m(n, n);
  for (int j = 0; j < n; ++j) {
    std::vector<Real> col(n);
    for (int i = 0; i < n; ++i) col[i] = a(i, j);
    col = solve_lower(l, std::move(col));
    for (int i = 0; i < n; ++i) m(i, j) = col[i];
  }
  for (int i = 0; i < n; ++i) {
    std::vector<Real> row(n);
    for (int j = 0; j < n; ++j) row[j] = m(i, j);
    row = solve_lower(l, std::move(row));
    for (int j = 0; j < n; ++j) m(i, j) = row[j];
  }
  // Restore symmetry lost to rounding before iterating.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Real v = (m(i, j) + m(j, i)) / Real(2);
      m(i, j) = v;
      m(j, i) = v;
    }

  std::vector<Real> w;
  SmallMat<Real> y;
  jacobi_eigensymm(std::move(m), w, y);

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int x, int z) { return w[x] < w[z]; });

  for (int j = 0; j < n; ++j) {
    std::vector<Real> col(n);
    for (int i = 0; i < n; ++i) col[i] = y(i, order[j]);
    col = solve_lower_transposed(l, std::move(col));
    for (int i = 0; i < n; ++i) vecs(i, j) = col[i];
    values[j] = w[order[j]];
  }
}

}  // namespace sfem
