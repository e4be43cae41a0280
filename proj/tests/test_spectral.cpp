#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "sfem/oracle.hpp"
#include "sfem/spectral.hpp"

using namespace sfem;

TEST_CASE("theta equation, order 1: closed-form root") {
  const auto em = build_element_matrices<double>(1);
  InteriorEigenSystemT<double> empty;
  // (a0 - lambda c0) + theta (an - lambda cn) = 0 with a0=1/2, c0=2/3,
  // an=-1/2, cn=1/3.
  for (double theta : {-0.9, -0.3, 0.0, 0.5, 0.99}) {
    const auto roots = solve_theta_equation(empty, em, theta);
    REQUIRE(roots.size() == 1);
    const double expect = (0.5 - 0.5 * theta) / (2.0 / 3.0 + theta / 3.0);
    CHECK(roots[0] == doctest::Approx(expect).epsilon(1e-14));
  }
  CHECK(solve_theta_equation(empty, em, 0.0)[0] == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("theta equation, order 2: one root on each side of the pole") {
  const auto em = build_element_matrices<double>(2);
  const auto es = interior_eigensystem(em);
  for (double theta : {-0.8, 0.0, 0.6}) {
    const auto roots = solve_theta_equation(es, em, theta);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] > 0);
    CHECK(roots[0] < 2.5);
    CHECK(roots[1] > 2.5);
  }
}

TEST_CASE("roots satisfy the equation and interlace the poles") {
  for (int n : {3, 5, 9}) {
    const auto em = build_element_matrices<double>(n);
    const auto es = interior_eigensystem(em);
    std::mt19937 rng(n);
    std::uniform_real_distribution<double> u(-0.999, 0.999);
    for (int trial = 0; trial < 20; ++trial) {
      const double theta = u(rng);
      const auto roots = solve_theta_equation(es, em, theta);
      REQUIRE(static_cast<int>(roots.size()) == n);
      const detail::ThetaEquation<double> eq(es, em, theta);
      for (double r : roots) CHECK(eq.relative_residual(r) <= 1e-10);
      // strict interlacing with the interior eigenvalues
      for (int l = 0; l < n; ++l) {
        if (l <= n - 2) CHECK(roots[l] < es.values[l]);
        if (l >= 1) CHECK(roots[l] > es.values[l - 1]);
      }
    }
  }
}

TEST_CASE("interior solve agrees with a dense linear solve") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int n : {2, 3, 5, 9}) {
    const auto em = build_element_matrices<double>(n);
    const auto es = interior_eigensystem(em);
    const int m = n - 1;
    for (int trial = 0; trial < 25; ++trial) {
      const double lambda = u(rng);
      bool near_pole = false;
      for (double p : es.values)
        if (std::abs(lambda - p) < 1e-3 * (1 + p)) near_pole = true;
      if (near_pole) continue;

      const auto p = interior_solution(es, lambda);
      // residual of (Aint - lambda Cint) p = -(a - lambda c)
      double worst = 0, scale = 0;
      for (int i = 0; i < m; ++i) {
        double lhs = 0;
        for (int j = 0; j < m; ++j)
          lhs += (em.stiff_blocks.interior(i, j) - lambda * em.mass_blocks.interior(i, j)) * p[j];
        const double rhs = -(em.stiff_blocks.edge[i] - lambda * em.mass_blocks.edge[i]);
        worst = std::max(worst, std::abs(lhs - rhs));
        scale = std::max(scale, std::abs(rhs));
      }
      CHECK(worst <= 1e-12 * std::max(1.0, scale) * (1 + std::abs(lambda)));
    }
    CHECK_THROWS_AS(interior_solution(es, es.values[0] + es.values[0] * 1e-12), Error);
  }
  // order 1 has no interior: lambda = 0 instance collapses to the empty vector
  InteriorEigenSystemT<double> empty;
  empty.order = 1;
  CHECK(interior_solution(empty, 0.37).empty());
}

TEST_CASE("interior solve at lambda=0 is the stiffness solve") {
  const auto em = build_element_matrices<double>(2);
  const auto es = interior_eigensystem(em);
  const auto p = interior_solution(es, 0.0);
  REQUIRE(p.size() == 1);
  CHECK(p[0] == doctest::Approx(-em.stiff_blocks.edge[0] / em.stiff_blocks.interior(0, 0)).epsilon(1e-14));
}

TEST_CASE("spectral table counts and positivity") {
  const auto t22 = build_spectral_table(2, 2);
  CHECK(t22.coeff_count() == 3);  // (n-1) + n(K-1)

  for (auto [n, K] : std::vector<std::pair<int, int>>{{1, 4}, {3, 5}, {5, 8}}) {
    const auto t = build_spectral_table(n, K);
    CHECK(t.coeff_count() == n * K - 1);
    const auto eigs = t.eigenvalues_coeff_order();
    CHECK(static_cast<int>(eigs.size()) == n * K - 1);
    for (double v : eigs) CHECK(v > 0);
    for (int k = 1; k < K; ++k)
      for (int l = 1; l < n; ++l)
        CHECK(t.values[t.pair_index(k, l)] < t.values[t.pair_index(k, l + 1)]);
  }
}

TEST_CASE("table eigenvalues match the dense pencil") {
  for (auto [n, K] : std::vector<std::pair<int, int>>{{1, 4}, {2, 2}, {3, 4}, {5, 8}}) {
    const auto t = build_spectral_table(n, K);
    auto mine = t.eigenvalues_coeff_order();
    std::sort(mine.begin(), mine.end());
    const auto [a, c] = oracle::assemble_global_1d(n, K);
    const auto dense = oracle::pencil_eigenvalues(a, c);
    REQUIRE(dense.size() == static_cast<int>(mine.size()));
    for (int i = 0; i < dense.size(); ++i)
      CHECK(mine[i] == doctest::Approx(dense[i]).epsilon(1e-9));
  }
}

TEST_CASE("materialized eigenvectors satisfy the five-term recurrences") {
  for (auto [n, K] : std::vector<std::pair<int, int>>{{1, 5}, {2, 4}, {4, 6}}) {
    const auto t = build_spectral_table(n, K);
    for (int k = 0; k < K; ++k) {
      for (int l = 1; l <= (k == 0 ? n - 1 : n); ++l) {
        const auto v = materialize_eigenvector(t, k, l);
        const auto av = apply_stiffness_1d(v, t.element);
        const auto cv = apply_mass_1d(v, t.element);
        const double lambda = t.eigenvalue(k, l);
        double worst = 0;
        for (size_t i = 0; i < av.nodal.size(); ++i)
          worst = std::max(worst, std::abs(av.nodal[i] - lambda * cv.nodal[i]));
        for (size_t i = 0; i < av.interior.size(); ++i)
          worst = std::max(worst, std::abs(av.interior[i] - lambda * cv.interior[i]));
        CHECK(worst <= 1e-10 * (1 + lambda));
      }
    }
  }
}

TEST_CASE("zero-frequency eigenvectors: zero nodal part, alternating interior") {
  const auto t = build_spectral_table(3, 6);
  const auto v = materialize_eigenvector(t, 0, 1);
  for (double x : v.nodal) CHECK(x == 0.0);
  const auto e = t.interior.vector(1);
  for (int j = 1; j <= 6; ++j)
    for (int i = 0; i < 2; ++i) {
      const double expect = (j % 2 == 1) ? e[i] : -e[1 - i];
      CHECK(v.interior[(j - 1) * 2 + i] == doctest::Approx(expect).epsilon(1e-15));
    }
}

TEST_CASE("nodal part of a frequency eigenvector is the sine profile") {
  const auto t = build_spectral_table(2, 2);
  const auto v = materialize_eigenvector(t, 1, 1);
  CHECK(v.nodal[1] == doctest::Approx(1.0).epsilon(1e-15));  // sin(pi/2)
}

TEST_CASE("C-orthogonality and the norm closed form") {
  for (auto [n, K] : std::vector<std::pair<int, int>>{{2, 4}, {4, 8}}) {
    const auto t = build_spectral_table(n, K);
    std::vector<GridFunction1D> basis;
    for (int l = 1; l < n; ++l) basis.push_back(materialize_eigenvector(t, 0, l));
    for (int k = 1; k < K; ++k)
      for (int l = 1; l <= n; ++l) basis.push_back(materialize_eigenvector(t, k, l));

    const int count = t.coeff_count();
    for (int i = 0; i < count; ++i) {
      const double di = oracle::mass_inner(basis[i], basis[i], t.element);
      for (int j = i + 1; j < count; ++j) {
        const double dj = oracle::mass_inner(basis[j], basis[j], t.element);
        const double off = oracle::mass_inner(basis[i], basis[j], t.element);
        CHECK(std::abs(off) / std::sqrt(di * dj) <= 1e-10);
      }
    }
    // diagonal: k = 0 entries equal K, k >= 1 match the stored closed form
    for (int l = 1; l < n; ++l) {
      const double nn = oracle::mass_inner(basis[l - 1], basis[l - 1], t.element);
      CHECK(nn == doctest::Approx(static_cast<double>(K)).epsilon(1e-12));
    }
    int idx = n - 1;
    for (int k = 1; k < K; ++k)
      for (int l = 1; l <= n; ++l, ++idx) {
        const double nn = oracle::mass_inner(basis[idx], basis[idx], t.element);
        CHECK(nn == doctest::Approx(t.norm_sq[t.pair_index(k, l)]).epsilon(1e-12));
      }
  }
}

TEST_CASE("save/load round-trips the table at stored precision") {
  const std::string path = "/tmp/sfem_test_table.txt";
  const auto t = build_spectral_table(3, 5);
  save_table(t, path);
  const auto t2 = load_table(path, 3, 5);
  CHECK(t2.source_digits == 17);
  REQUIRE(t2.values.size() == t.values.size());
  for (size_t i = 0; i < t.values.size(); ++i) CHECK(t.values[i] == t2.values[i]);
  for (size_t i = 0; i < t.p.size(); ++i) CHECK(t.p[i] == t2.p[i]);
  for (size_t i = 0; i < t.norm_sq.size(); ++i) CHECK(t.norm_sq[i] == t2.norm_sq[i]);
  for (size_t i = 0; i < t.q.size(); ++i) CHECK(t.q[i] == doctest::Approx(t2.q[i]).epsilon(1e-15));
  for (int l = 1; l < 3; ++l) CHECK(t.interior.values[l - 1] == t2.interior.values[l - 1]);
  std::remove(path.c_str());
}

TEST_CASE("load rejects mismatched, truncated and malformed files") {
  const std::string path = "/tmp/sfem_test_table2.txt";
  const auto t = build_spectral_table(2, 4);
  save_table(t, path);

  CHECK_THROWS_AS(load_table(path, 2, 8), Error);  // wrong K requested
  CHECK_THROWS_AS(load_table(path, 3, 4), Error);  // wrong order
  CHECK_THROWS_AS(load_table("/tmp/sfem_no_such_file.txt", 2, 4), Error);

  // truncate: drop the last line
  {
    std::ifstream in(path);
    std::vector<std::string> lines;
    std::string l;
    while (std::getline(in, l)) lines.push_back(l);
    std::ofstream out(path);
    for (size_t i = 0; i + 1 < lines.size(); ++i) out << lines[i] << "\n";
  }
  CHECK_THROWS_AS(load_table(path, 2, 4), Error);

  {
    std::ofstream out(path);
    out << "NOTSFEM 2 4 17\n";
  }
  CHECK_THROWS_AS(load_table(path, 2, 4), Error);
  std::remove(path.c_str());
}

TEST_CASE("extended-precision build writes 35-digit records and loads back") {
  const std::string path = "/tmp/sfem_test_table3.txt";
  const auto t = build_and_save_table(3, 4, path, Precision::Extended);
  CHECK(t.source_digits == 35);
  {
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "SFEM1 3 4 35");
    std::string record;
    std::getline(in, record);
    CHECK(record.size() > 60);  // several 35-digit numbers per line
  }
  const auto t2 = load_table(path, 3, 4);
  const auto td = build_spectral_table(3, 4);
  for (size_t i = 0; i < td.values.size(); ++i)
    CHECK(t2.values[i] == doctest::Approx(td.values[i]).epsilon(1e-13));
  std::remove(path.c_str());
}

TEST_CASE("theta values are plain cosines") {
  const auto t = build_spectral_table(2, 8);
  for (int k = 1; k < 8; ++k) CHECK(t.theta[k - 1] == doctest::Approx(std::cos(M_PI * k / 8.0)).epsilon(1e-15));
}
