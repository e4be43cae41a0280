#pragma once

// Per-mesh spectral data for the 1D problem: the n roots of the rational
// characteristic equation at every mesh frequency theta_k = cos(pi k/K),
// the interior solution vector attached to each root, and the squared
// C-norms that normalize the expansion. Everything the fast transforms need
// is precomputed here once per (n, K).

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sfem/element.hpp"
#include "sfem/grid1d.hpp"
#include "sfem/types.hpp"

namespace sfem {

namespace detail {

// Left side of the frequency equation in pole/residue form:
//   g(lambda) = (a0 + theta*an) - lambda (c0 + theta*cn)
//             + sum_l (1 + theta*sigma_l) (a_l - lambda c_l)^2 / (lambda - lambda0_l)
// Roots of g are the mesh eigenvalues attached to the frequency theta.
template <class Real>
struct ThetaEquation {
  Real affine_a, affine_b;           // g = affine_a - lambda*affine_b + sum ...
  std::vector<Real> pole;            // interior eigenvalues
  std::vector<Real> coef;            // 1 + theta*sigma_l (positive for |theta|<1)
  std::vector<Real> num_a, num_c;    // projections a_l, c_l

  ThetaEquation(const InteriorEigenSystemT<Real>& es, const ElementMatricesT<Real>& em,
                const Real& theta) {
    affine_a = em.stiff_blocks.corner + theta * em.stiff_blocks.cross;
    affine_b = em.mass_blocks.corner + theta * em.mass_blocks.cross;
    const int m = em.order - 1;
    pole.resize(m);
    coef.resize(m);
    num_a.resize(m);
    num_c.resize(m);
    for (int l = 0; l < m; ++l) {
      pole[l] = es.values[l];
      coef[l] = Real(1) + theta * Real(es.parity[l]);
      num_a[l] = es.edge_stiff[l];
      num_c[l] = es.edge_mass[l];
    }
  }

  Real value(const Real& x) const {
    Real s = affine_a - x * affine_b;
    for (size_t l = 0; l < pole.size(); ++l) {
      const Real d = num_a[l] - x * num_c[l];
      s += coef[l] * d * d / (x - pole[l]);
    }
    return s;
  }

  Real derivative(const Real& x) const {
    Real s = -affine_b;
    for (size_t l = 0; l < pole.size(); ++l) {
      const Real d = num_a[l] - x * num_c[l];
      const Real u = x - pole[l];
      s += coef[l] * (-Real(2) * num_c[l] * d * u - d * d) / (u * u);
    }
    return s;
  }

  // Residual scaled by the magnitude of the individual terms.
  Real relative_residual(const Real& x) const {
    using std::abs;
    Real scale = abs(affine_a) + abs(x * affine_b);
    for (size_t l = 0; l < pole.size(); ++l) {
      const Real d = num_a[l] - x * num_c[l];
      scale += abs(coef[l] * d * d / (x - pole[l]));
    }
    if (scale == Real(0)) scale = Real(1);
    return abs(value(x)) / scale;
  }
};

// Bracketed hybrid Newton/bisection, bracket maintained throughout.
// On entry g(lo) > 0 > g(hi).
template <class Real>
Real refine_root(const ThetaEquation<Real>& eq, Real lo, Real hi) {
  using std::abs;
  const Real eps = std::numeric_limits<Real>::epsilon();
  Real x = (lo + hi) / Real(2);
  for (int it = 0; it < 500; ++it) {
    const Real g = eq.value(x);
    if (g > Real(0))
      lo = x;
    else if (g < Real(0))
      hi = x;
    else
      return x;
    const Real width = hi - lo;
    if (!(width > Real(4) * eps * (abs(lo) + abs(hi)))) break;
    const Real dg = eq.derivative(x);
    Real next = x - g / dg;
    if (!(next > lo) || !(next < hi)) next = (lo + hi) / Real(2);
    x = next;
  }
  return (lo + hi) / Real(2);
}

}  // namespace detail

/// The n positive roots of the frequency equation at parameter `theta`,
/// ascending, strictly interlacing the interior eigenvalues. Fails if the
/// expected sign-change brackets cannot be located.
template <class Real>
std::vector<Real> solve_theta_equation(const InteriorEigenSystemT<Real>& es,
                                       const ElementMatricesT<Real>& em, const Real& theta) {
  using std::abs;
  const int n = em.order;
  if (n == 1) {
    // No interior block: the equation is affine in lambda.
    const Real num = em.stiff_blocks.corner + theta * em.stiff_blocks.cross;
    const Real den = em.mass_blocks.corner + theta * em.mass_blocks.cross;
    return {num / den};
  }

  const detail::ThetaEquation<Real> eq(es, em, theta);
  const int m = n - 1;
  const auto bracket_fail = [&](const std::string& what) {
    fail("solve_theta_equation: " + what + " (order " + std::to_string(n) + ", theta " +
         std::to_string(static_cast<double>(theta)) + ")");
  };

  // A point just right of pole l where g is positive (the residues are
  // positive, so g -> +inf there), and just left where it is negative.
  const auto right_of_pole = [&](int l) -> Real {
    const Real p = eq.pole[l];
    Real gap = (l + 1 < m ? eq.pole[l + 1] : Real(2) * p + Real(1)) - p;
    Real d = gap / Real(8);
    for (int it = 0; it < 2000; ++it) {
      if (eq.value(p + d) > Real(0)) return p + d;
      d /= Real(2);
      if (!(p + d > p)) break;
    }
    bracket_fail("no positive bracket right of pole " + std::to_string(l + 1));
    return p;
  };
  const auto left_of_pole = [&](int l) -> Real {
    const Real p = eq.pole[l];
    Real gap = p - (l > 0 ? eq.pole[l - 1] : Real(0));
    Real d = gap / Real(8);
    for (int it = 0; it < 2000; ++it) {
      if (eq.value(p - d) < Real(0)) return p - d;
      d /= Real(2);
      if (!(p - d < p)) break;
    }
    bracket_fail("no negative bracket left of pole " + std::to_string(l + 1));
    return p;
  };

  std::vector<Real> roots;
  roots.reserve(n);

  // Leftmost root lives in (0, pole_1); g(0) > 0 for |theta| < 1.
  {
    Real lo(0);
    if (!(eq.value(lo) > Real(0))) {
      Real step = eq.pole[0] / Real(4);
      bool found = false;
      for (int it = 0; it < 64 && !found; ++it, step *= Real(2)) {
        lo = -step;
        found = eq.value(lo) > Real(0);
      }
      if (!found) bracket_fail("no positive bracket below the first pole");
    }
    roots.push_back(detail::refine_root(eq, lo, left_of_pole(0)));
  }
  // One root strictly between consecutive poles.
  for (int l = 0; l + 1 < m; ++l)
    roots.push_back(detail::refine_root(eq, right_of_pole(l), left_of_pole(l + 1)));
  // Rightmost root above the last pole; grow the outer bracket until the
  // sign flips, within a fixed budget.
  {
    Real hi = Real(4) * eq.pole[m - 1] + Real(4) * abs(eq.affine_a) + Real(4);
    const Real cap = Real(64) * hi;
    while (!(eq.value(hi) < Real(0))) {
      hi *= Real(2);
      if (hi > cap) bracket_fail("outer bracket cap reached");
    }
    roots.push_back(detail::refine_root(eq, right_of_pole(m - 1), hi));
  }

  for (int i = 0; i + 1 < n; ++i)
    if (!(roots[i] < roots[i + 1])) bracket_fail("roots not strictly increasing");
  return roots;
}

/// Interior solution p of (interior stiffness - lambda * interior mass) p =
/// -(edge_stiff - lambda * edge_mass), via the eigenexpansion. `lambda` must
/// stay clear of the interior eigenvalues.
template <class Real>
std::vector<Real> interior_solution(const InteriorEigenSystemT<Real>& es, const Real& lambda,
                                    double pole_tol = 1e-8) {
  using std::abs;
  const int m = es.order - 1;
  std::vector<Real> p(m, Real(0));
  for (int l = 0; l < m; ++l) {
    const Real d = lambda - es.values[l];
    if (!(abs(d) > Real(pole_tol) * (Real(1) + abs(es.values[l]))))
      fail("interior_solution: lambda within pole tolerance of interior eigenvalue l=" +
           std::to_string(l + 1));
    const Real w = (es.edge_stiff[l] - lambda * es.edge_mass[l]) / d;
    for (int i = 0; i < m; ++i) p[i] += w * es.vectors(i, l);
  }
  return p;
}

/// Raw build output at working precision: eigenvalues, interior vectors and
/// squared norms per (k, l), plus the element data they came from.
template <class Real>
struct TablePrimariesT {
  int order = 0, elements = 0;
  ElementMatricesT<Real> element;
  InteriorEigenSystemT<Real> interior;   // empty for n == 1
  std::vector<Real> theta;               // k = 1..K-1
  std::vector<Real> values;              // (K-1)*n, l-minor
  std::vector<Real> interior_vec;        // (K-1)*n*(n-1)
  std::vector<Real> norm_sq;             // (K-1)*n
};

template <class Real>
TablePrimariesT<Real> build_table_primaries(int n, int K, int order_cap = kMaxOrderDouble) {
  using std::abs;
  using std::acos;
  using std::cos;
  require(K >= 2, "spectral table: need at least two elements");
  TablePrimariesT<Real> t;
  t.order = n;
  t.elements = K;
  t.element = build_element_matrices<Real>(n, order_cap);
  if (n >= 2) t.interior = interior_eigensystem(t.element);

  const int m = n - 1;
  const Real pi = acos(Real(-1));
  t.theta.resize(K - 1);
  t.values.resize(static_cast<size_t>(K - 1) * n);
  t.interior_vec.resize(static_cast<size_t>(K - 1) * n * m);
  t.norm_sq.resize(static_cast<size_t>(K - 1) * n);

  const auto& mb = t.element.mass_blocks;
  for (int k = 1; k < K; ++k) {
    const Real theta = cos(pi * Real(k) / Real(K));
    t.theta[k - 1] = theta;
    const std::vector<Real> roots = solve_theta_equation(t.interior, t.element, theta);
    for (int l = 1; l <= n; ++l) {
      const Real lambda = roots[l - 1];
      const size_t idx = static_cast<size_t>(k - 1) * n + (l - 1);
      t.values[idx] = lambda;

      std::vector<Real> p(m);
      if (m > 0) p = interior_solution(t.interior, lambda);
      for (int i = 0; i < m; ++i) t.interior_vec[idx * m + i] = p[i];

      // ||s||_C^2 = K { c0 + (Cint p + 2c).p + theta [ cn + (Cint p + 2c).p_rev ] }
      std::vector<Real> cp = m > 0 ? matvec(mb.interior, p) : std::vector<Real>{};
      Real term_direct = mb.corner, term_rev = mb.cross;
      for (int i = 0; i < m; ++i) {
        const Real w = cp[i] + Real(2) * mb.edge[i];
        term_direct += w * p[i];
        term_rev += w * p[m - 1 - i];
      }
      const Real norm_sq = Real(K) * (term_direct + theta * term_rev);
      if (!(norm_sq > Real(0)))
        fail("spectral table: nonpositive squared norm at k=" + std::to_string(k) +
             " l=" + std::to_string(l));
      t.norm_sq[idx] = norm_sq;
    }
  }
  return t;
}

/// Runtime spectral table (always double): primaries plus everything the
/// transforms consume per frequency, laid out for k-major access.
struct SpectralTable1D {
  int order = 0;     // n
  int elements = 0;  // K
  int source_digits = 17;  // decimal digits the primaries were generated with
  ElementMatrices element;
  InteriorEigenSystem interior;  // empty (order 0) when n == 1

  std::vector<double> theta;               // k = 1..K-1
  std::vector<double> half_cos, half_sin;  // cos/sin(pi k / 2K)

  // Indexed [(k-1)*n + (l-1)]:
  std::vector<double> values;
  std::vector<double> norm_sq;
  std::vector<double> nodal_weight;  // 2[c0 + c.p + theta (cn + c.p_rev)]
  // Interior vectors, [(k-1)*n + (l-1)] blocks of n-1:
  std::vector<double> p;  // interior solution vector
  std::vector<double> q;  // Cint p + c
  // Parity-folded slot data, [(k-1)*n + (l-1)] blocks of even_slots()/odd_slots():
  std::vector<double> p_even, p_odd, q_even, q_odd;

  int interior_dim() const { return order - 1; }
  int even_slots() const { return order / 2; }            // independent even components
  int odd_slots() const { return (order - 1) / 2; }       // independent odd components
  int coeff_count() const { return order * elements - 1; }
  size_t pair_index(int k, int l) const { return static_cast<size_t>(k - 1) * order + (l - 1); }

  double eigenvalue(int k, int l) const {
    return k == 0 ? interior.values[l - 1] : values[pair_index(k, l)];
  }
  /// All nK-1 eigenvalues in coefficient order (zero-frequency block first).
  std::vector<double> eigenvalues_coeff_order() const;
};

/// Build the table in the requested arithmetic. Extended generation mirrors
/// producing the eigenpairs at high precision and rounding once at the end.
SpectralTable1D build_spectral_table(int n, int K, Precision prec = Precision::Double);

/// Build and write the cache file in one go; with Precision::Extended the
/// file carries 35 significant digits. Returns the (double) runtime table.
SpectralTable1D build_and_save_table(int n, int K, const std::string& path,
                                     Precision prec = Precision::Double);

/// Plain-text cache round-trip. Loading validates the header against the
/// requested (n, K) and rejects truncated or malformed payloads.
void save_table(const SpectralTable1D& table, const std::string& path);
SpectralTable1D load_table(const std::string& path, int n, int K);

/// Assemble the eigenvector for index (k, l) as a grid function (test and
/// diagnostic use).
GridFunction1D materialize_eigenvector(const SpectralTable1D& table, int k, int l);

namespace detail {
SpectralTable1D finalize_table(TablePrimariesT<double> primaries, int source_digits);
TablePrimariesT<double> build_primaries_extended(int n, int K, int digits,
                                                 std::vector<std::string>* records);
std::vector<std::string> format_records(const TablePrimariesT<double>& t, int digits);
}  // namespace detail

}  // namespace sfem
