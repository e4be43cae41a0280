#include <doctest.h>

#include <cmath>
#include <random>

#include "sfem/eigenbasis.hpp"
#include "sfem/oracle.hpp"
#include "sfem/trig.hpp"

using namespace sfem;

namespace {

GridFunction1D random_grid(int n, int K, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GridFunction1D g = GridFunction1D::zeros(n, K);
  for (int j = 1; j < K; ++j) g.nodal[j] = u(rng);
  for (auto& v : g.interior) v = u(rng);
  return g;
}

CoefficientArray1D random_coeffs(int n, int K, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CoefficientArray1D c = CoefficientArray1D::zeros(n, K);
  for (auto& v : c.data) v = u(rng);
  return c;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0;
  for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("indicator coefficients synthesize to the materialized eigenvectors") {
  for (auto [n, K] : std::vector<std::pair<int, int>>{{1, 4}, {2, 3}, {3, 5}, {5, 4}}) {
    const auto t = build_spectral_table(n, K);
    for (int k = 0; k < K; ++k)
      for (int l = 1; l <= (k == 0 ? n - 1 : n); ++l) {
        CoefficientArray1D ind = CoefficientArray1D::zeros(n, K);
        ind.at(k, l) = 1.0;
        const auto g = synthesize(ind, t);
        const auto want = materialize_eigenvector(t, k, l);
        CHECK(max_diff(g.nodal, want.nodal) <= 1e-12);
        CHECK(max_diff(g.interior, want.interior) <= 1e-12);
      }
  }
}

TEST_CASE("synthesis matches the dense expansion for random coefficients") {
  const auto t = build_spectral_table(3, 5);
  const auto c = random_coeffs(3, 5, 71);
  const auto fast = synthesize(c, t);
  const auto dense = oracle::dense_synthesize(c, t);
  CHECK(max_diff(fast.nodal, dense.nodal) <= 1e-11);
  CHECK(max_diff(fast.interior, dense.interior) <= 1e-11);
}

TEST_CASE("weighted analysis of C times an eigenvector gives an indicator") {
  for (auto [n, K] : std::vector<std::pair<int, int>>{{2, 4}, {4, 5}}) {
    const auto t = build_spectral_table(n, K);
    for (int k = 0; k < K; ++k)
      for (int l = 1; l <= (k == 0 ? n - 1 : n); ++l) {
        const auto y = oracle::mass_apply(materialize_eigenvector(t, k, l), t.element);
        const auto c = decompose_weighted(y, t);
        for (int kk = 0; kk < K; ++kk)
          for (int ll = 1; ll <= (kk == 0 ? n - 1 : n); ++ll)
            CHECK(c.at(kk, ll) == doctest::Approx((kk == k && ll == l) ? 1.0 : 0.0).epsilon(1e-11));
      }
  }
}

TEST_CASE("weighted analysis matches the dense Gram solve") {
  const auto t = build_spectral_table(2, 4);
  const auto y = random_grid(2, 4, 5);
  const auto fast = decompose_weighted(y, t);
  const auto dense = oracle::gram_solve_coefficients(y, t);
  CHECK(max_diff(fast.data, dense.data) <= 1e-11);
}

TEST_CASE("nodal-only sine input excites a single frequency") {
  const int n = 3, K = 8, k0 = 3;
  const auto t = build_spectral_table(n, K);
  GridFunction1D y = GridFunction1D::zeros(n, K);
  for (int j = 1; j < K; ++j) y.nodal[j] = std::sin(M_PI * j * k0 / K);
  const auto c = decompose_weighted(y, t);
  for (int k = 1; k < K; ++k)
    for (int l = 1; l <= n; ++l)
      if (k != k0) CHECK(std::abs(c.at(k, l)) <= 1e-12);
  for (int l = 1; l < n; ++l) CHECK(std::abs(c.at(0, l)) <= 1e-12);
}

TEST_CASE("decompose of an eigenvector gives an indicator") {
  const auto t = build_spectral_table(3, 4);
  const auto s = materialize_eigenvector(t, 2, 1);
  const auto c = decompose(s, t);
  for (int k = 0; k < 4; ++k)
    for (int l = 1; l <= (k == 0 ? 2 : 3); ++l)
      CHECK(c.at(k, l) == doctest::Approx((k == 2 && l == 1) ? 1.0 : 0.0).epsilon(1e-11));
}

TEST_CASE("roundtrip identities both ways") {
  for (int n : {1, 2, 3, 5, 9}) {
    for (int K : {2, 3, 4, 8, 31, 64}) {
      const auto t = build_spectral_table(n, K);
      {
        const auto c = random_coeffs(n, K, 1000u + n * 64 + K);
        const auto back = decompose(synthesize(c, t), t);
        CHECK(max_diff(c.data, back.data) <= 1e-11);
      }
      {
        const auto g = random_grid(n, K, 2000u + n * 64 + K);
        const auto back = synthesize(decompose(g, t), t);
        CHECK(max_diff(g.nodal, back.nodal) <= 1e-11);
        CHECK(max_diff(g.interior, back.interior) <= 1e-11);
      }
    }
  }
}

TEST_CASE("both direct routes agree") {
  for (auto [n, K] : std::vector<std::pair<int, int>>{{1, 8}, {3, 7}, {5, 12}}) {
    const auto t = build_spectral_table(n, K);
    const auto g = random_grid(n, K, 30u + n + K);
    const auto a = decompose(g, t, DirectRoute::Spectral);
    const auto b = decompose(g, t, DirectRoute::MassApply);
    CHECK(max_diff(a.data, b.data) <= 1e-12);
  }
}

TEST_CASE("direct equals weighted-after-mass for random functions") {
  const auto t = build_spectral_table(4, 6);
  const auto w = random_grid(4, 6, 55);
  const auto direct = decompose(w, t);
  const auto via_mass = decompose_weighted(oracle::mass_apply(w, t.element), t);
  CHECK(max_diff(direct.data, via_mass.data) <= 1e-12);
}

TEST_CASE("neighbor-combination interior values have no zero-frequency content") {
  // w_{j-1/2} = q w_{j-1} + q_rev w_j makes all k=0 weighted coefficients
  // vanish.
  const int n = 4, K = 6, m = n - 1;
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> q(m);
  for (auto& v : q) v = u(rng);

  const auto t = build_spectral_table(n, K);
  GridFunction1D w = GridFunction1D::zeros(n, K);
  for (int j = 1; j < K; ++j) w.nodal[j] = u(rng);
  for (int j = 1; j <= K; ++j)
    for (int i = 0; i < m; ++i)
      w.interior[(j - 1) * m + i] = q[i] * w.nodal[j - 1] + q[m - 1 - i] * w.nodal[j];

  const auto c = decompose_weighted(w, t);
  for (int l = 1; l < n; ++l) CHECK(std::abs(c.at(0, l)) <= 1e-12);
}

TEST_CASE("exactly n trig transforms per operation") {
  for (auto [n, K] : std::vector<std::pair<int, int>>{{1, 8}, {2, 5}, {5, 16}, {9, 8}}) {
    const auto t = build_spectral_table(n, K);
    const auto g = random_grid(n, K, 4u + n);
    const auto c = random_coeffs(n, K, 5u + n);

    auto before = trig::invocation_count();
    (void)decompose_weighted(g, t);
    CHECK(trig::invocation_count() - before == static_cast<unsigned>(n));

    before = trig::invocation_count();
    (void)decompose(g, t);
    CHECK(trig::invocation_count() - before == static_cast<unsigned>(n));

    before = trig::invocation_count();
    (void)synthesize(c, t);
    CHECK(trig::invocation_count() - before == static_cast<unsigned>(n));
  }
}

TEST_CASE("Parseval-style identity for the mass inner product") {
  for (auto [n, K] : std::vector<std::pair<int, int>>{{2, 6}, {5, 9}}) {
    const auto t = build_spectral_table(n, K);
    const auto w = random_grid(n, K, 60u + n);
    const auto c = decompose(w, t);
    double sum = 0;
    for (int l = 1; l < n; ++l) sum += c.at(0, l) * c.at(0, l) * K;
    for (int k = 1; k < K; ++k)
      for (int l = 1; l <= n; ++l)
        sum += c.at(k, l) * c.at(k, l) * t.norm_sq[t.pair_index(k, l)];
    const double direct = oracle::mass_inner(w, w, t.element);
    CHECK(sum == doctest::Approx(direct).epsilon(1e-11));
  }
}

TEST_CASE("dimension mismatches are rejected") {
  const auto t = build_spectral_table(2, 4);
  const auto g = random_grid(2, 5, 1);
  CHECK_THROWS_AS(decompose(g, t), Error);
  CHECK_THROWS_AS(decompose_weighted(g, t), Error);
  const auto c = random_coeffs(3, 4, 1);
  CHECK_THROWS_AS(synthesize(c, t), Error);
}
