#pragma once

// Reference-element data for the order-n Lagrange basis on [-1,1]:
// local stiffness/mass matrices, their 3x3 block decomposition
// (node corner / node-node cross coupling / node-interior column /
// interior block), and the eigenstructure of the interior block pencil.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "sfem/lagrange.hpp"
#include "sfem/quadrature.hpp"
#include "sfem/smallmat.hpp"
#include "sfem/types.hpp"

namespace sfem {

/// 3x3 block decomposition of a bisymmetric (n+1)x(n+1) element matrix:
///   [ corner   edge^T    cross  ]
///   [ edge     interior  edge_r ]
///   [ cross    edge_r^T  corner ]
/// where edge_r is edge reversed.
template <class Real>
struct ElementBlocks {
  Real corner{};                 // (0,0) entry, equals (n,n)
  Real cross{};                  // (0,n) entry, equals (n,0)
  std::vector<Real> edge;        // rows 1..n-1 of column 0
  std::vector<Real> edge_rev;    // rows 1..n-1 of column n
  SmallMat<Real> interior;       // rows/cols 1..n-1
};

template <class Real>
struct ElementMatricesT {
  int order = 0;                      // polynomial order n
  SmallMat<Real> stiffness;           // entries \int e_k' e_l'
  SmallMat<Real> mass;                // entries \int e_k e_l
  ElementBlocks<Real> stiff_blocks;
  ElementBlocks<Real> mass_blocks;
};

using ElementMatrices = ElementMatricesT<double>;

/// Eigenpairs of the interior pencil (stiffness interior block against mass
/// interior block), mass-normalized, each vector exactly even or odd under
/// index reversal. Sorted ascending.
template <class Real>
struct InteriorEigenSystemT {
  int order = 0;
  std::vector<Real> values;              // size n-1, strictly increasing
  SmallMat<Real> vectors;                // (n-1)x(n-1), column l-1 holds e^(l)
  std::vector<int> parity;               // +1 even, -1 odd, per vector
  std::vector<Real> edge_stiff;          // stiffness edge dotted with e^(l)
  std::vector<Real> edge_mass;           // mass edge dotted with e^(l)
  std::vector<Real> edge_stiff_rev;      // reversed-edge projections
  std::vector<Real> edge_mass_rev;
  bool parity_alternating = false;       // even,odd,even,... as l increases

  std::vector<Real> vector(int l) const {  // l is 1-based
    std::vector<Real> e(order - 1);
    for (int i = 0; i < order - 1; ++i) e[i] = vectors(i, l - 1);
    return e;
  }
};

using InteriorEigenSystem = InteriorEigenSystemT<double>;

struct AssumptionReport {
  int order = 0;
  bool pass = false;
  double separation_tol = 0;
  double min_gap_full = 0;        // within the full element spectrum
  double min_gap_interior = 0;    // within the interior spectrum (inf for n=2)
  double min_cross_distance = 0;  // between the two spectra
  double delta_full = 0;          // min_gap_full - pi^2/4
  double delta_interior = 0;      // min_gap_interior - 3*pi^2/4
  bool precision_caveat = false;  // double precision beyond the verified range
  std::vector<double> full_spectrum;
  std::vector<double> interior_spectrum;
};

namespace detail {

template <class Real>
void symmetrize_bisymmetric(SmallMat<Real>& m) {
  const int n = m.rows - 1;
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      const Real v = (m(i, j) + m(j, i)) / Real(2);
      m(i, j) = v;
      m(j, i) = v;
    }
  // Copy the canonical half onto its flip image so that the persymmetry
  // holds exactly, not just to rounding.
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const int fi = n - i, fj = n - j;
      if (std::make_pair(fi, fj) > std::make_pair(i, j)) m(fi, fj) = m(i, j);
    }
}

template <class Real>
ElementBlocks<Real> carve_blocks(const SmallMat<Real>& m) {
  const int n = m.rows - 1;
  ElementBlocks<Real> b;
  b.corner = m(0, 0);
  b.cross = m(0, n);
  b.edge.resize(n - 1 > 0 ? n - 1 : 0);
  b.edge_rev.resize(b.edge.size());
  b.interior = SmallMat<Real>(n - 1 > 0 ? n - 1 : 0, n - 1 > 0 ? n - 1 : 0);
  for (int i = 1; i < n; ++i) {
    b.edge[i - 1] = m(i, 0);
    b.edge_rev[i - 1] = m(i, n);
    for (int j = 1; j < n; ++j) b.interior(i - 1, j - 1) = m(i, j);
  }
  return b;
}

// Orthonormal basis of the even (sign=+1) or odd (sign=-1) subspace of R^m
// under index reversal, as columns.
template <class Real>
SmallMat<Real> parity_basis(int m, int sign) {
  using std::sqrt;
  const int half = m / 2;
  const int dim = (sign > 0) ? (m + 1) / 2 : m / 2;
  SmallMat<Real> u(m, dim);
  const Real r = Real(1) / sqrt(Real(2));
  for (int i = 0; i < half; ++i) {
    u(i, i) = r;
    u(m - 1 - i, i) = (sign > 0) ? r : -r;
  }
  if (sign > 0 && m % 2 == 1) u(half, dim - 1) = Real(1);
  return u;
}

// Pencil eigenpairs computed separately on the even and odd subspaces, then
// merged ascending. Vectors are exactly parity-pure and B-normalized; the
// first nonzero entry of each is made positive.
template <class Real>
void parity_pencil_eig(const SmallMat<Real>& a, const SmallMat<Real>& b, std::vector<Real>& values,
                       SmallMat<Real>& vecs, std::vector<int>& parity) {
  using std::abs;
  const int m = a.rows;
  values.assign(m, Real(0));
  vecs = SmallMat<Real>(m, m);
  parity.assign(m, 0);
  if (m == 0) return;

  struct Pair {
    Real value;
    std::vector<Real> vec;
    int parity;
  };
  std::vector<Pair> pairs;
  pairs.reserve(m);

  for (int sign : {+1, -1}) {
    const SmallMat<Real> u = parity_basis<Real>(m, sign);
    if (u.cols == 0) continue;
    const SmallMat<Real> ut = transpose(u);
    const SmallMat<Real> ar = matmul(ut, matmul(a, u));
    const SmallMat<Real> br = matmul(ut, matmul(b, u));
    std::vector<Real> w;
    SmallMat<Real> y;
    pencil_eigensymm(ar, br, w, y);
    for (int j = 0; j < u.cols; ++j) {
      Pair p;
      p.value = w[j];
      p.parity = sign;
      p.vec.assign(m, Real(0));
      for (int i = 0; i < m; ++i) {
        Real s(0);
        for (int k = 0; k < u.cols; ++k) s += u(i, k) * y(k, j);
        p.vec[i] = s;
      }
      pairs.push_back(std::move(p));
    }
  }

  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.value < y.value; });

  for (int j = 0; j < m; ++j) {
    Real peak(0);
    for (const Real& v : pairs[j].vec)
      if (abs(v) > peak) peak = abs(v);
    for (int i = 0; i < m; ++i) {
      if (abs(pairs[j].vec[i]) > peak / Real(1048576)) {
        if (pairs[j].vec[i] < Real(0))
          for (Real& v : pairs[j].vec) v = -v;
        break;
      }
    }
    values[j] = pairs[j].value;
    parity[j] = pairs[j].parity;
    for (int i = 0; i < m; ++i) vecs(i, j) = pairs[j].vec[i];
  }
}

}  // namespace detail

template <class Real>
ElementMatricesT<Real> build_element_matrices(int n, int order_cap = kMaxOrderDouble);

template <class Real>
std::vector<Real> element_spectrum_full(const ElementMatricesT<Real>& em);

namespace detail {

template <class Real>
AssumptionReport assumption_report_impl(int n, double separation_tol, bool precision_caveat) {
  using std::abs;
  const ElementMatricesT<Real> em = build_element_matrices<Real>(n, kMaxOrder);
  const std::vector<Real> full = element_spectrum_full(em);

  std::vector<Real> inter;
  {
    SmallMat<Real> vecs;
    std::vector<int> parity;
    parity_pencil_eig(em.stiff_blocks.interior, em.mass_blocks.interior, inter, vecs, parity);
  }

  const double inf = std::numeric_limits<double>::infinity();
  AssumptionReport r;
  r.order = n;
  r.separation_tol = separation_tol;
  r.precision_caveat = precision_caveat;
  r.min_gap_full = inf;
  r.min_gap_interior = inf;
  r.min_cross_distance = inf;
  for (size_t i = 0; i + 1 < full.size(); ++i)
    r.min_gap_full = std::min(r.min_gap_full, static_cast<double>(full[i + 1] - full[i]));
  for (size_t i = 0; i + 1 < inter.size(); ++i)
    r.min_gap_interior = std::min(r.min_gap_interior, static_cast<double>(inter[i + 1] - inter[i]));
  for (const Real& s : full)
    for (const Real& t : inter)
      r.min_cross_distance = std::min(r.min_cross_distance, static_cast<double>(abs(s - t)));

  const double pi_sq = M_PI * M_PI;
  r.delta_full = r.min_gap_full - pi_sq / 4.0;
  r.delta_interior = r.min_gap_interior - 3.0 * pi_sq / 4.0;
  r.pass = r.min_gap_full > separation_tol && r.min_gap_interior > separation_tol &&
           r.min_cross_distance > separation_tol;
  r.full_spectrum.resize(full.size());
  r.interior_spectrum.resize(inter.size());
  for (size_t i = 0; i < full.size(); ++i) r.full_spectrum[i] = static_cast<double>(full[i]);
  for (size_t i = 0; i < inter.size(); ++i) r.interior_spectrum[i] = static_cast<double>(inter[i]);
  return r;
}

// Defined in the extended-precision translation unit.
AssumptionReport assumption_report_extended(int n, double separation_tol);

}  // namespace detail

/// Local stiffness and mass matrices of the order-n Lagrange basis on [-1,1],
/// integrated with an (n+1)-point Gauss rule (exact through degree 2n+1).
template <class Real>
ElementMatricesT<Real> build_element_matrices(int n, int order_cap) {
  require(order_cap <= kMaxOrder, "build_element_matrices: cap exceeds supported maximum");
  require(n >= 1 && n <= order_cap,
          "build_element_matrices: order " + std::to_string(n) + " outside [1, " +
              std::to_string(order_cap) + "]");

  const std::vector<Real> nodes = equispaced_nodes<Real>(n);
  const QuadratureRule<Real> rule = gauss_legendre<Real>(n + 1);

  SmallMat<Real> vals(n + 1, n + 1), ders(n + 1, n + 1);  // (basis, gauss point)
  for (int l = 0; l <= n; ++l)
    for (int g = 0; g <= n; ++g) {
      vals(l, g) = lagrange_value(nodes, l, rule.nodes[g]);
      ders(l, g) = lagrange_derivative(nodes, l, rule.nodes[g]);
    }

  ElementMatricesT<Real> em;
  em.order = n;
  em.stiffness = SmallMat<Real>(n + 1, n + 1);
  em.mass = SmallMat<Real>(n + 1, n + 1);
  for (int k = 0; k <= n; ++k)
    for (int l = 0; l <= n; ++l) {
      Real sa(0), sc(0);
      for (int g = 0; g <= n; ++g) {
        sa += rule.weights[g] * ders(k, g) * ders(l, g);
        sc += rule.weights[g] * vals(k, g) * vals(l, g);
      }
      em.stiffness(k, l) = sa;
      em.mass(k, l) = sc;
    }

  detail::symmetrize_bisymmetric(em.stiffness);
  detail::symmetrize_bisymmetric(em.mass);
  em.stiff_blocks = detail::carve_blocks(em.stiffness);
  em.mass_blocks = detail::carve_blocks(em.mass);
  return em;
}

/// Even/odd decomposition of a vector under index reversal:
/// p = p_even + p_odd with reverse(p_even) = p_even, reverse(p_odd) = -p_odd.
template <class Real>
std::pair<std::vector<Real>, std::vector<Real>> even_odd_split(const std::vector<Real>& p) {
  const size_t m = p.size();
  std::vector<Real> pe(m), po(m);
  for (size_t i = 0; i < m; ++i) {
    pe[i] = (p[i] + p[m - 1 - i]) / Real(2);
    po[i] = (p[i] - p[m - 1 - i]) / Real(2);
  }
  return {pe, po};
}

/// Eigenpairs of the interior pencil, solved parity-block by parity-block.
/// Throws if two eigenvalues collide (that would break the closed-form
/// eigenvector construction downstream).
template <class Real>
InteriorEigenSystemT<Real> interior_eigensystem(const ElementMatricesT<Real>& em) {
  using std::abs;
  require(em.order >= 2, "interior_eigensystem: order must be at least 2");
  const int m = em.order - 1;

  InteriorEigenSystemT<Real> es;
  es.order = em.order;
  detail::parity_pencil_eig(em.stiff_blocks.interior, em.mass_blocks.interior, es.values, es.vectors,
                            es.parity);

  for (int j = 0; j + 1 < m; ++j) {
    const Real gap = es.values[j + 1] - es.values[j];
    if (!(gap > Real(1e-12) * (Real(1) + abs(es.values[j + 1]))))
      fail("interior_eigensystem: eigenvalue multiplicity between l=" + std::to_string(j + 1) +
           " and l=" + std::to_string(j + 2) + " at order " + std::to_string(em.order));
  }

  es.edge_stiff.resize(m);
  es.edge_mass.resize(m);
  es.edge_stiff_rev.resize(m);
  es.edge_mass_rev.resize(m);
  for (int l = 1; l <= m; ++l) {
    const std::vector<Real> e = es.vector(l);
    es.edge_stiff[l - 1] = dot(em.stiff_blocks.edge, e);
    es.edge_mass[l - 1] = dot(em.mass_blocks.edge, e);
    es.edge_stiff_rev[l - 1] = dot(em.stiff_blocks.edge_rev, e);
    es.edge_mass_rev[l - 1] = dot(em.mass_blocks.edge_rev, e);
  }

  es.parity_alternating = true;
  for (int l = 1; l <= m; ++l)
    if (es.parity[l - 1] != ((l % 2 == 1) ? +1 : -1)) es.parity_alternating = false;
  return es;
}

/// All n+1 eigenvalues of the full element pencil, ascending. The smallest
/// is zero (constants) up to rounding.
template <class Real>
std::vector<Real> element_spectrum_full(const ElementMatricesT<Real>& em) {
  std::vector<Real> values;
  SmallMat<Real> vecs;
  std::vector<int> parity;
  detail::parity_pencil_eig(em.stiffness, em.mass, values, vecs, parity);
  return values;
}

/// Checks that both element spectra consist of simple eigenvalues and do not
/// intersect; gap diagnostics included. Never throws: the verdict is in the
/// report.
AssumptionReport verify_assumption_a(int n, double separation_tol, Precision prec = Precision::Double);

}  // namespace sfem
