#include "sfem/banded.hpp"

#include <cmath>

namespace sfem {

namespace {

// Interleaved dof index of local slot `loc` (0..n) in element `e`, or -1 for
// a boundary node.
inline int dof_of_local(int n, int K, int e, int loc) {
  if (loc == 0) return e == 0 ? -1 : e * n - 1;
  if (loc == n) return e == K - 1 ? -1 : (e + 1) * n - 1;
  return e * n + loc - 1;
}

}  // namespace

BandMatrix assemble_band_1d(const ElementBlocks<double>& blocks, int order, int elements) {
  const int n = order, K = elements;
  BandMatrix m = BandMatrix::zeros(n * K - 1, n);

  const auto entry = [&](int loc_i, int loc_j) -> double {
    // Reconstruct the local matrix entry from its block decomposition.
    if (loc_i > loc_j) std::swap(loc_i, loc_j);
    if (loc_i == 0 && loc_j == 0) return blocks.corner;
    if (loc_i == 0 && loc_j == n) return blocks.cross;
    if (loc_i == n && loc_j == n) return blocks.corner;
    if (loc_i == 0) return blocks.edge[loc_j - 1];
    if (loc_j == n) return blocks.edge_rev[loc_i - 1];
    return blocks.interior(loc_i - 1, loc_j - 1);
  };

  for (int e = 0; e < K; ++e)
    for (int li = 0; li <= n; ++li) {
      const int gi = dof_of_local(n, K, e, li);
      if (gi < 0) continue;
      for (int lj = 0; lj <= li; ++lj) {
        const int gj = dof_of_local(n, K, e, lj);
        if (gj < 0) continue;
        const int row = std::max(gi, gj), col = std::min(gi, gj);
        if (li == lj || gi != gj)  // skip double-counting of identical slots
          m.at(row - col, col) += entry(li, lj);
      }
    }
  return m;
}

void band_cholesky(BandMatrix& m) {
  const int dim = m.dim, bw = m.bandwidth;
  for (int j = 0; j < dim; ++j) {
    double s = m.at(0, j);
    const int lo = std::max(0, j - bw);
    for (int q = lo; q < j; ++q) {
      const double l = m.at(j - q, q);
      s -= l * l;
    }
    if (!(s > 0.0)) fail("band_cholesky: indefinite matrix (pivot " + std::to_string(j) + ")");
    const double pivot = std::sqrt(s);
    m.at(0, j) = pivot;
    const int hi = std::min(dim - 1, j + bw);
    for (int i = j + 1; i <= hi; ++i) {
      double t = m.at(i - j, j);
      const int qlo = std::max(0, i - bw);
      for (int q = std::max(qlo, lo); q < j; ++q) t -= m.at(i - q, q) * m.at(j - q, q);
      m.at(i - j, j) = t / pivot;
    }
  }
}

void band_solve(const BandMatrix& chol, double* x) {
  const int dim = chol.dim, bw = chol.bandwidth;
  for (int i = 0; i < dim; ++i) {
    double s = x[i];
    const int lo = std::max(0, i - bw);
    for (int q = lo; q < i; ++q) s -= chol.at(i - q, q) * x[q];
    x[i] = s / chol.at(0, i);
  }
  for (int i = dim - 1; i >= 0; --i) {
    double s = x[i];
    const int hi = std::min(dim - 1, i + bw);
    for (int q = i + 1; q <= hi; ++q) s -= chol.at(q - i, i) * x[q];
    x[i] = s / chol.at(0, i);
  }
}

void gather_dof_line(int order, int elements, const double* nodal, std::int64_t nodal_stride,
                     const double* interior, std::int64_t interior_stride, double* dof) {
  const int n = order, K = elements, m = n - 1;
  for (int e = 0; e < K; ++e) {
    for (int c = 0; c < m; ++c)
      dof[e * n + c] = interior[(static_cast<std::int64_t>(e) * m + c) * interior_stride];
    if (e + 1 < K) dof[(e + 1) * n - 1] = nodal[static_cast<std::int64_t>(e + 1) * nodal_stride];
  }
}

void scatter_dof_line(int order, int elements, const double* dof, double* nodal,
                      std::int64_t nodal_stride, double* interior, std::int64_t interior_stride) {
  const int n = order, K = elements, m = n - 1;
  nodal[0] = 0.0;
  nodal[static_cast<std::int64_t>(K) * nodal_stride] = 0.0;
  for (int e = 0; e < K; ++e) {
    for (int c = 0; c < m; ++c)
      interior[(static_cast<std::int64_t>(e) * m + c) * interior_stride] = dof[e * n + c];
    if (e + 1 < K) nodal[static_cast<std::int64_t>(e + 1) * nodal_stride] = dof[(e + 1) * n - 1];
  }
}

}  // namespace sfem
