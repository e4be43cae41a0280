#include "sfem/oracle.hpp"

#include <cmath>

#include "sfem/banded.hpp"

namespace sfem::oracle {

namespace {

// Interleaved dof index along one axis: interior values of element e at
// e*n .. e*n+n-2, node j at j*n-1.
int dof_of_local(int n, int K, int e, int loc) {
  if (loc == 0) return e == 0 ? -1 : e * n - 1;
  if (loc == n) return e == K - 1 ? -1 : (e + 1) * n - 1;
  return e * n + loc - 1;
}

Eigen::MatrixXd assemble_one(const SmallMat<double>& local, int n, int K) {
  const int dim = n * K - 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (int e = 0; e < K; ++e)
    for (int li = 0; li <= n; ++li) {
      const int gi = dof_of_local(n, K, e, li);
      if (gi < 0) continue;
      for (int lj = 0; lj <= n; ++lj) {
        const int gj = dof_of_local(n, K, e, lj);
        if (gj < 0) continue;
        m(gi, gj) += local(li, lj);
      }
    }
  return m;
}

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> assemble_global_1d(int order, int elements) {
  require(order * elements - 1 <= kDenseCap, "assemble_global_1d: size exceeds the dense cap");
  const ElementMatrices em = build_element_matrices<double>(order);
  return {assemble_one(em.stiffness, order, elements), assemble_one(em.mass, order, elements)};
}

Eigen::VectorXd pencil_eigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, c, Eigen::EigenvaluesOnly);
  require(solver.info() == Eigen::Success, "pencil_eigenvalues: eigensolver failed");
  return solver.eigenvalues();
}

Eigen::VectorXd pack_1d(const GridFunction1D& g) {
  const int n = g.order, K = g.elements;
  Eigen::VectorXd v(n * K - 1);
  gather_dof_line(n, K, g.nodal.data(), 1, g.interior.data(), 1, v.data());
  return v;
}

GridFunction1D unpack_1d(const Eigen::VectorXd& v, int order, int elements) {
  GridFunction1D g = GridFunction1D::zeros(order, elements);
  scatter_dof_line(order, elements, v.data(), g.nodal.data(), 1, g.interior.data(), 1);
  return g;
}

namespace {

// Per-axis map from the interleaved dof index to (class bit, class index).
struct DofMap {
  std::vector<int> interior_flag, class_index;
  explicit DofMap(const AxisSpec& ax) {
    const int n = ax.order, K = ax.elements;
    interior_flag.resize(ax.dof_extent());
    class_index.resize(ax.dof_extent());
    for (int t = 0; t < ax.dof_extent(); ++t) {
      const int r = t % n;
      if (r == n - 1) {
        interior_flag[t] = 0;
        class_index[t] = t / n + 1;  // node number
      } else {
        interior_flag[t] = 1;
        class_index[t] = (t / n) * (n - 1) + r;
      }
    }
  }
};

}  // namespace

Eigen::VectorXd pack_nd(const GridFunctionND& g) {
  const int N = g.dim();
  std::vector<DofMap> maps;
  std::vector<int> ext(N);
  for (int i = 0; i < N; ++i) {
    maps.emplace_back(g.axes[i]);
    ext[i] = g.axes[i].dof_extent();
  }
  const TensorShape shape(ext);
  std::vector<TensorShape> class_shapes;
  for (unsigned mask = 0; mask < g.classes.size(); ++mask)
    class_shapes.emplace_back(g.class_extents(mask));

  Eigen::VectorXd v(shape.total);
  std::vector<int> idx(N, 0);
  for (std::int64_t flat = 0; flat < shape.total; ++flat) {
    unsigned mask = 0;
    std::int64_t off = 0;
    for (int i = 0; i < N; ++i)
      if (maps[i].interior_flag[idx[i]]) mask |= 1u << i;
    for (int i = 0; i < N; ++i) off += maps[i].class_index[idx[i]] * class_shapes[mask].stride[i];
    v[flat] = g.classes[mask][off];
    for (int i = N - 1; i >= 0; --i) {
      if (++idx[i] < ext[i]) break;
      idx[i] = 0;
    }
  }
  return v;
}

GridFunctionND unpack_nd(const Eigen::VectorXd& v, const std::vector<AxisSpec>& axes) {
  GridFunctionND g = GridFunctionND::zeros(axes);
  const int N = g.dim();
  std::vector<DofMap> maps;
  std::vector<int> ext(N);
  for (int i = 0; i < N; ++i) {
    maps.emplace_back(axes[i]);
    ext[i] = axes[i].dof_extent();
  }
  const TensorShape shape(ext);
  std::vector<TensorShape> class_shapes;
  for (unsigned mask = 0; mask < g.classes.size(); ++mask)
    class_shapes.emplace_back(g.class_extents(mask));

  std::vector<int> idx(N, 0);
  for (std::int64_t flat = 0; flat < shape.total; ++flat) {
    unsigned mask = 0;
    std::int64_t off = 0;
    for (int i = 0; i < N; ++i)
      if (maps[i].interior_flag[idx[i]]) mask |= 1u << i;
    for (int i = 0; i < N; ++i) off += maps[i].class_index[idx[i]] * class_shapes[mask].stride[i];
    g.classes[mask][off] = v[flat];
    for (int i = N - 1; i >= 0; --i) {
      if (++idx[i] < ext[i]) break;
      idx[i] = 0;
    }
  }
  return g;
}

GridFunctionND dense_solve_nd(const ProblemSpec& spec, const GridFunctionND& load) {
  spec.validate();
  const int N = spec.dimension;
  std::int64_t unknowns = 1;
  for (int i = 0; i < N; ++i) unknowns *= spec.orders[i] * spec.elements[i] - 1;
  require(unknowns <= kDenseCap, "dense_solve_nd: size exceeds the dense cap");

  std::vector<Eigen::MatrixXd> stiff(N), mass(N);
  for (int i = 0; i < N; ++i)
    std::tie(stiff[i], mass[i]) = assemble_global_1d(spec.orders[i], spec.elements[i]);

  const auto kron = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  };

  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(unknowns, unknowns);
  const std::vector<double> h = [&] {
    std::vector<double> v(N);
    for (int i = 0; i < N; ++i) v[i] = spec.lengths[i] / spec.elements[i];
    return v;
  }();
  for (int t = 0; t <= N; ++t) {
    // t < N: stiffness along axis t; t == N: the shift times the full mass.
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(1, 1);
    for (int i = 0; i < N; ++i) term = kron(term, (i == t) ? stiff[i] : mass[i]);
    system += (t == N ? spec.shift : 4.0 / (h[t] * h[t])) * term;
  }

  const Eigen::VectorXd rhs = pack_nd(load);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
  require(ldlt.info() == Eigen::Success, "dense_solve_nd: factorization failed");
  const Eigen::VectorXd x = ldlt.solve(rhs);
  require((system * x - rhs).norm() <= 1e-8 * (1.0 + rhs.norm()),
          "dense_solve_nd: factorization produced a poor solution");
  return unpack_nd(x, spec.axis_specs());
}

GridFunction1D mass_apply(const GridFunction1D& w, const ElementMatrices& em) {
  return apply_mass_1d(w, em);
}

double mass_inner(const GridFunction1D& a, const GridFunction1D& b, const ElementMatrices& em) {
  const GridFunction1D ca = apply_mass_1d(a, em);
  double s = 0;
  for (int j = 1; j < a.elements; ++j) s += ca.nodal[j] * b.nodal[j];
  for (size_t i = 0; i < a.interior.size(); ++i) s += ca.interior[i] * b.interior[i];
  return s;
}

std::vector<double> dst1_direct(std::span<const double> x) {
  const int K = static_cast<int>(x.size()) + 1;
  std::vector<double> out(x.size(), 0.0);
  for (int k = 1; k < K; ++k) {
    double s = 0;
    for (int j = 1; j < K; ++j) s += x[j - 1] * std::sin(M_PI * j * k / K);
    out[k - 1] = s;
  }
  return out;
}

std::vector<double> dst3_synthesis_direct(std::span<const double> b) {
  const int K = static_cast<int>(b.size());
  std::vector<double> out(K, 0.0);
  for (int j = 1; j <= K; ++j) {
    double s = 0;
    for (int k = 1; k <= K; ++k) s += b[k - 1] * std::sin(M_PI * k * (j - 0.5) / K);
    out[j - 1] = s;
  }
  return out;
}

std::vector<double> dct3_synthesis_direct(std::span<const double> a) {
  const int K = static_cast<int>(a.size());
  std::vector<double> out(K, 0.0);
  for (int j = 1; j <= K; ++j) {
    double s = 0;
    for (int k = 0; k < K; ++k) s += a[k] * std::cos(M_PI * k * (j - 0.5) / K);
    out[j - 1] = s;
  }
  return out;
}

CoefficientArray1D gram_solve_coefficients(const GridFunction1D& y, const SpectralTable1D& table) {
  const int n = table.order, K = table.elements;
  const int count = table.coeff_count();
  require(count <= kDenseCap, "gram_solve_coefficients: size exceeds the dense cap");

  std::vector<GridFunction1D> basis;
  basis.reserve(count);
  for (int l = 1; l < n; ++l) basis.push_back(materialize_eigenvector(table, 0, l));
  for (int k = 1; k < K; ++k)
    for (int l = 1; l <= n; ++l) basis.push_back(materialize_eigenvector(table, k, l));

  Eigen::MatrixXd gram(count, count);
  Eigen::VectorXd rhs(count);
  for (int i = 0; i < count; ++i) {
    const GridFunction1D ci = apply_mass_1d(basis[i], table.element);
    for (int j = 0; j < count; ++j) {
      double s = 0;
      for (int t = 1; t < K; ++t) s += ci.nodal[t] * basis[j].nodal[t];
      for (size_t t = 0; t < ci.interior.size(); ++t) s += ci.interior[t] * basis[j].interior[t];
      gram(i, j) = s;
    }
    double s = 0;
    for (int t = 1; t < K; ++t) s += basis[i].nodal[t] * y.nodal[t];
    for (size_t t = 0; t < basis[i].interior.size(); ++t) s += basis[i].interior[t] * y.interior[t];
    rhs(i) = s;
  }
  // Gram system of the expansion y = sum c_i (C basis_i):
  // <basis_j, y> = sum_i c_i <basis_j, C basis_i>.
  const Eigen::VectorXd c = gram.ldlt().solve(rhs);

  CoefficientArray1D out = CoefficientArray1D::zeros(n, K);
  for (int i = 0; i < count; ++i) out.data[i] = c(i);
  return out;
}

GridFunction1D dense_synthesize(const CoefficientArray1D& coeffs, const SpectralTable1D& table) {
  const int n = table.order, K = table.elements;
  GridFunction1D g = GridFunction1D::zeros(n, K);
  int idx = 0;
  const auto add = [&](int k, int l, double c) {
    const GridFunction1D s = materialize_eigenvector(table, k, l);
    for (int j = 0; j <= K; ++j) g.nodal[j] += c * s.nodal[j];
    for (size_t t = 0; t < g.interior.size(); ++t) g.interior[t] += c * s.interior[t];
  };
  for (int l = 1; l < n; ++l) add(0, l, coeffs.data[idx++]);
  for (int k = 1; k < K; ++k)
    for (int l = 1; l <= n; ++l) add(k, l, coeffs.data[idx++]);
  return g;
}

}  // namespace sfem::oracle
