#include "sfem/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "sfem/cases.hpp"
#include "sfem/eigenbasis.hpp"
#include "sfem/trig.hpp"
#include "sfem/oracle.hpp"
#include "sfem/poisson.hpp"

namespace sfem::verify {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

struct Suite {
  std::vector<CheckResult> results;

  void check(const std::string& name, double worst, double tol) {
    results.push_back({name, worst <= tol, "worst " + fmt(worst) + ", tol " + fmt(tol)});
  }
  void check_flag(const std::string& name, bool pass, const std::string& detail) {
    results.push_back({name, pass, detail});
  }
  template <class Fn>
  void guarded(const std::string& name, Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      results.push_back({name, false, e.what()});
    }
  }
};

std::vector<double> random_vector(size_t size, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(size);
  for (double& x : v) x = u(rng);
  return v;
}

double trig_vs_direct(int K) {
  double worst = 0;
  const std::vector<double> x = random_vector(K - 1, 100 + K);
  const auto a = trig::dst1(x), ar = oracle::dst1_direct(x);
  for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - ar[i]));
  const std::vector<double> b = random_vector(K, 200 + K);
  const auto s = trig::dst3_synthesis(b), sr = oracle::dst3_synthesis_direct(b);
  const auto c = trig::dct3_synthesis(b), cr = oracle::dct3_synthesis_direct(b);
  for (int i = 0; i < K; ++i) {
    worst = std::max(worst, std::abs(s[i] - sr[i]));
    worst = std::max(worst, std::abs(c[i] - cr[i]));
  }
  return worst;
}

double roundtrip_error(const SpectralTable1D& t, unsigned seed) {
  CoefficientArray1D c = CoefficientArray1D::zeros(t.order, t.elements);
  c.data = random_vector(c.data.size(), seed);
  const GridFunction1D g = synthesize(c, t);
  const CoefficientArray1D back = decompose(g, t);
  double worst = 0;
  for (size_t i = 0; i < c.data.size(); ++i) worst = std::max(worst, std::abs(c.data[i] - back.data[i]));
  return worst;
}

double pencil_vs_table(const SpectralTable1D& t) {
  const auto [a, c] = oracle::assemble_global_1d(t.order, t.elements);
  const Eigen::VectorXd dense = oracle::pencil_eigenvalues(a, c);
  std::vector<double> mine = t.eigenvalues_coeff_order();
  std::sort(mine.begin(), mine.end());
  double worst = 0;
  for (int i = 0; i < dense.size(); ++i)
    worst = std::max(worst, std::abs(dense[i] - mine[i]) / std::max(1.0, std::abs(dense[i])));
  return worst;
}

double gram_diagonality(const SpectralTable1D& t) {
  const int count = t.coeff_count();
  std::vector<GridFunction1D> basis;
  for (int l = 1; l < t.order; ++l) basis.push_back(materialize_eigenvector(t, 0, l));
  for (int k = 1; k < t.elements; ++k)
    for (int l = 1; l <= t.order; ++l) basis.push_back(materialize_eigenvector(t, k, l));
  double worst = 0;
  for (int i = 0; i < count; ++i) {
    const double di = oracle::mass_inner(basis[i], basis[i], t.element);
    for (int j = i + 1; j < count; ++j) {
      const double dj = oracle::mass_inner(basis[j], basis[j], t.element);
      const double off = oracle::mass_inner(basis[i], basis[j], t.element);
      worst = std::max(worst, std::abs(off) / std::sqrt(di * dj));
    }
  }
  return worst;
}

double norm_identity(const SpectralTable1D& t) {
  double worst = 0;
  for (int l = 1; l < t.order; ++l) {
    const GridFunction1D s = materialize_eigenvector(t, 0, l);
    const double nn = oracle::mass_inner(s, s, t.element);
    worst = std::max(worst, std::abs(nn - t.elements) / t.elements);
  }
  for (int k = 1; k < t.elements; ++k)
    for (int l = 1; l <= t.order; ++l) {
      const GridFunction1D s = materialize_eigenvector(t, k, l);
      const double nn = oracle::mass_inner(s, s, t.element);
      const double stored = t.norm_sq[t.pair_index(k, l)];
      worst = std::max(worst, std::abs(nn - stored) / stored);
    }
  return worst;
}

double nd_oracle_agreement(int n, int K) {
  ProblemSpec spec = make_problem(manufactured_case("poisson2d"), 1.0, {K, K}, {n, n});
  const GridFunctionND load = fem_load_average(spec);
  TableSet tables;
  SolveOptions opt;
  const SolveReport fast = solve_with_load(spec, load, tables, opt);
  const GridFunctionND dense = oracle::dense_solve_nd(spec, load);
  return fast.solution.max_abs_diff(dense) / std::max(1.0, dense.max_abs());
}

double algorithm_agreement(int n, int K) {
  ProblemSpec spec = make_problem(manufactured_case("poisson2d"), 1.0, {K, K}, {n, n});
  const GridFunctionND load = fem_load_average(spec);
  TableSet tables;
  SolveOptions a, b;
  b.algorithm = Algorithm::PartialDiagonalization;
  const SolveReport ra = solve_with_load(spec, load, tables, a);
  const SolveReport rb = solve_with_load(spec, load, tables, b);
  return ra.solution.max_abs_diff(rb.solution);
}

}  // namespace

std::vector<CheckResult> run_suite(Level level) {
  Suite s;
  const bool full = level == Level::Full;

  s.guarded("trig-vs-direct-summation", [&] {
    double worst = 0;
    for (int K : {2, 3, 5, 8, 16}) worst = std::max(worst, trig_vs_direct(K));
    if (full)
      for (int K : {12, 31, 64}) worst = std::max(worst, trig_vs_direct(K));
    s.check("trig-vs-direct-summation", worst, 1e-12);
  });

  s.guarded("closed-form-interior-spectra", [&] {
    const std::vector<std::vector<double>> expected = {
        {2.5},
        {2.5, 10.5},
        {14 - std::sqrt(133.0), 10.5, 14 + std::sqrt(133.0)},
        {14 - std::sqrt(133.0), 30 - 9 * std::sqrt(5.0), 14 + std::sqrt(133.0),
         30 + 9 * std::sqrt(5.0)}};
    double worst = 0;
    for (int n = 2; n <= 5; ++n) {
      auto es = interior_eigensystem(build_element_matrices<double>(n));
      std::vector<double> want = expected[n - 2];
      std::sort(want.begin(), want.end());
      for (int i = 0; i < n - 1; ++i)
        worst = std::max(worst, std::abs(es.values[i] - want[i]) / want[i]);
    }
    s.check("closed-form-interior-spectra", worst, 1e-12);
  });

  s.guarded("transform-roundtrip", [&] {
    double worst = 0;
    for (int n : {1, 2, 3})
      for (int K : {2, 4, 8}) worst = std::max(worst, roundtrip_error(build_spectral_table(n, K), n * 37 + K));
    if (full)
      for (int n : {5, 9})
        for (int K : {31, 64})
          worst = std::max(worst, roundtrip_error(build_spectral_table(n, K), n * 59 + K));
    s.check("transform-roundtrip", worst, 1e-11);
  });

  s.guarded("dense-pencil-vs-table", [&] {
    double worst = 0;
    for (auto [n, K] : std::vector<std::pair<int, int>>{{1, 8}, {2, 4}, {3, 4}})
      worst = std::max(worst, pencil_vs_table(build_spectral_table(n, K)));
    if (full)
      for (auto [n, K] : std::vector<std::pair<int, int>>{{5, 8}, {9, 4}})
        worst = std::max(worst, pencil_vs_table(build_spectral_table(n, K)));
    s.check("dense-pencil-vs-table", worst, 1e-9);
  });

  s.guarded("eigenvector-orthogonality", [&] {
    double worst = gram_diagonality(build_spectral_table(3, 4));
    if (full) worst = std::max(worst, gram_diagonality(build_spectral_table(4, 8)));
    s.check("eigenvector-orthogonality", worst, 1e-10);
  });

  s.guarded("norm-closed-form", [&] {
    double worst = norm_identity(build_spectral_table(3, 4));
    if (full) worst = std::max(worst, norm_identity(build_spectral_table(5, 8)));
    s.check("norm-closed-form", worst, 1e-11);
  });

  s.guarded("solver-vs-dense-oracle-2d", [&] {
    double worst = nd_oracle_agreement(2, 4);
    if (full) worst = std::max(worst, nd_oracle_agreement(3, 8));
    s.check("solver-vs-dense-oracle-2d", worst, 1e-10);
  });

  s.guarded("algorithm-equivalence-2d", [&] {
    double worst = algorithm_agreement(2, 8);
    if (full) worst = std::max(worst, algorithm_agreement(4, 16));
    s.check("algorithm-equivalence-2d", worst, 1e-10);
  });

  s.guarded("assumption-a", [&] {
    const int n_max = full ? 9 : 5;
    bool pass = true;
    double worst_sep = std::numeric_limits<double>::infinity();
    for (int n = 2; n <= n_max; ++n) {
      const AssumptionReport r = verify_assumption_a(n, 1e-13);
      pass = pass && r.pass;
      worst_sep = std::min({worst_sep, r.min_gap_full, r.min_gap_interior, r.min_cross_distance});
    }
    s.check_flag("assumption-a", pass, "min separation " + fmt(worst_sep) + " over n<=" +
                                           std::to_string(n_max));
  });

  return s.results;
}

std::vector<CheckResult> check_table_file(const std::string& path, int order, int elements) {
  Suite s;
  SpectralTable1D t;
  try {
    t = load_table(path, order, elements);
  } catch (const std::exception& e) {
    s.check_flag("table-load", false, e.what());
    return s.results;
  }
  s.check_flag("table-load", true, "loaded " + std::to_string(t.coeff_count()) + " eigenpairs");

  // Tolerances track the stored precision.
  const double tol = std::pow(10.0, -(std::min(t.source_digits, 16) - 3));

  s.guarded("table-norm-identity", [&] {
    // Recompute the closed-form squared norm from the stored vectors.
    double worst = 0;
    const auto& mb = t.element.mass_blocks;
    const int m = t.interior_dim();
    for (int k = 1; k < t.elements; ++k)
      for (int l = 1; l <= t.order; ++l) {
        const size_t idx = t.pair_index(k, l);
        const double* p = t.p.data() + idx * m;
        double direct = mb.corner, rev = mb.cross;
        for (int i = 0; i < m; ++i) {
          double cp = mb.edge[i];
          for (int j = 0; j < m; ++j) cp += mb.interior(i, j) * p[j];
          direct += (cp + mb.edge[i]) * p[i];
          rev += (cp + mb.edge[i]) * p[m - 1 - i];
        }
        const double want = t.elements * (direct + t.theta[k - 1] * rev);
        worst = std::max(worst, std::abs(want - t.norm_sq[idx]) / std::max(1.0, std::abs(want)));
      }
    s.check("table-norm-identity", worst, tol);
  });

  s.guarded("table-eigen-residual", [&] {
    double worst = 0;
    for (int k = 0; k < t.elements; ++k)
      for (int l = 1; l <= (k == 0 ? t.order - 1 : t.order); ++l) {
        if (k == 0 && t.order == 1) continue;
        const GridFunction1D v = materialize_eigenvector(t, k, l);
        const GridFunction1D av = apply_stiffness_1d(v, t.element);
        const GridFunction1D cv = apply_mass_1d(v, t.element);
        const double lambda = t.eigenvalue(k, l);
        double res = 0, scale = 0;
        for (size_t i = 0; i < av.nodal.size(); ++i) {
          res = std::max(res, std::abs(av.nodal[i] - lambda * cv.nodal[i]));
          scale = std::max(scale, std::abs(av.nodal[i]));
        }
        for (size_t i = 0; i < av.interior.size(); ++i) {
          res = std::max(res, std::abs(av.interior[i] - lambda * cv.interior[i]));
          scale = std::max(scale, std::abs(av.interior[i]));
        }
        worst = std::max(worst, res / std::max(1.0, scale));
      }
    s.check("table-eigen-residual", worst, tol);
  });

  s.guarded("table-pole-interlacing", [&] {
    bool ok = true;
    for (int k = 1; k < t.elements && ok; ++k) {
      for (int l = 1; l <= t.order; ++l) {
        const double v = t.values[t.pair_index(k, l)];
        if (l <= t.order - 1 && !(v < t.interior.values[l - 1])) ok = false;
        if (l >= 2 && !(v > t.interior.values[l - 2])) ok = false;
      }
    }
    s.check_flag("table-pole-interlacing", ok, ok ? "strict" : "violated");
  });

  if (t.coeff_count() <= 512) {
    s.guarded("table-vs-dense-pencil", [&] { s.check("table-vs-dense-pencil", pencil_vs_table(t), 1e-9); });
  }
  return s.results;
}

}  // namespace sfem::verify
