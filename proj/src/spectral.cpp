#include "sfem/spectral.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sfem {

std::vector<double> SpectralTable1D::eigenvalues_coeff_order() const {
  std::vector<double> e;
  e.reserve(coeff_count());
  for (int l = 1; l < order; ++l) e.push_back(interior.values[l - 1]);
  for (int k = 1; k < elements; ++k)
    for (int l = 1; l <= order; ++l) e.push_back(values[pair_index(k, l)]);
  return e;
}

namespace detail {

SpectralTable1D finalize_table(TablePrimariesT<double> t, int source_digits) {
  const int n = t.order, K = t.elements, m = n - 1;
  SpectralTable1D r;
  r.order = n;
  r.elements = K;
  r.source_digits = source_digits;
  r.element = std::move(t.element);
  r.interior = std::move(t.interior);
  r.theta = std::move(t.theta);
  r.values = std::move(t.values);
  r.norm_sq = std::move(t.norm_sq);
  r.p = std::move(t.interior_vec);

  r.half_cos.resize(K - 1);
  r.half_sin.resize(K - 1);
  for (int k = 1; k < K; ++k) {
    r.half_cos[k - 1] = std::cos(M_PI * k / (2.0 * K));
    r.half_sin[k - 1] = std::sin(M_PI * k / (2.0 * K));
  }

  const auto& mb = r.element.mass_blocks;
  const int ne = r.even_slots(), no = r.odd_slots(), half = m / 2;
  const size_t pairs = static_cast<size_t>(K - 1) * n;
  r.q.resize(pairs * m);
  r.nodal_weight.resize(pairs);
  r.p_even.resize(pairs * ne);
  r.p_odd.resize(pairs * no);
  r.q_even.resize(pairs * ne);
  r.q_odd.resize(pairs * no);

  for (size_t idx = 0; idx < pairs; ++idx) {
    const double theta = r.theta[idx / n];
    const double* p = r.p.data() + idx * m;
    double* q = r.q.data() + idx * m;
    double edge_dot = 0, edge_dot_rev = 0;
    for (int i = 0; i < m; ++i) {
      double s = mb.edge[i];
      for (int j = 0; j < m; ++j) s += mb.interior(i, j) * p[j];
      q[i] = s;
      edge_dot += mb.edge[i] * p[i];
      edge_dot_rev += mb.edge[i] * p[m - 1 - i];
    }
    r.nodal_weight[idx] = 2.0 * (mb.corner + edge_dot + theta * (mb.cross + edge_dot_rev));

    // Independent components of the even/odd parts; pairwise-summed inputs
    // in the analysis kernels make these plain halves, no extra weights.
    for (int i = 0; i < half; ++i) {
      r.p_even[idx * ne + i] = 0.5 * (p[i] + p[m - 1 - i]);
      r.p_odd[idx * no + i] = 0.5 * (p[i] - p[m - 1 - i]);
      r.q_even[idx * ne + i] = 0.5 * (q[i] + q[m - 1 - i]);
      r.q_odd[idx * no + i] = 0.5 * (q[i] - q[m - 1 - i]);
    }
    if (m % 2 == 1) {
      r.p_even[idx * ne + half] = p[half];
      r.q_even[idx * ne + half] = q[half];
    }
  }
  return r;
}

std::vector<std::string> format_records(const TablePrimariesT<double>& t, int digits) {
  const int n = t.order, K = t.elements, m = n - 1;
  std::vector<std::string> lines;
  lines.reserve(static_cast<size_t>(n) * K - 1);
  char buf[64];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, " %.*g", digits, v);
    return std::string(buf);
  };
  for (int l = 1; l <= m; ++l) {
    std::string line = "0 " + std::to_string(l) + num(t.interior.values[l - 1]);
    for (int i = 0; i < m; ++i) line += num(t.interior.vectors(i, l - 1));
    line += num(static_cast<double>(K));  // squared norm of the zero-frequency vector
    lines.push_back(std::move(line));
  }
  for (int k = 1; k < K; ++k)
    for (int l = 1; l <= n; ++l) {
      const size_t idx = static_cast<size_t>(k - 1) * n + (l - 1);
      std::string line = std::to_string(k) + " " + std::to_string(l) + num(t.values[idx]);
      for (int i = 0; i < m; ++i) line += num(t.interior_vec[idx * m + i]);
      line += num(t.norm_sq[idx]);
      lines.push_back(std::move(line));
    }
  return lines;
}

}  // namespace detail

SpectralTable1D build_spectral_table(int n, int K, Precision prec) {
  if (prec == Precision::Extended)
    return detail::finalize_table(detail::build_primaries_extended(n, K, 35, nullptr), 35);
  return detail::finalize_table(build_table_primaries<double>(n, K), 17);
}

namespace {

void write_cache(const std::string& path, int n, int K, int digits,
                 const std::vector<std::string>& records) {
  std::ofstream out(path);
  if (!out) fail("save_table: cannot open '" + path + "' for writing");
  out << "SFEM1 " << n << " " << K << " " << digits << "\n";
  for (const std::string& line : records) out << line << "\n";
  if (!out) fail("save_table: write failed for '" + path + "'");
}

}  // namespace

void save_table(const SpectralTable1D& table, const std::string& path) {
  TablePrimariesT<double> t;
  t.order = table.order;
  t.elements = table.elements;
  t.interior = table.interior;
  t.theta = table.theta;
  t.values = table.values;
  t.interior_vec = table.p;
  t.norm_sq = table.norm_sq;
  write_cache(path, table.order, table.elements, 17, detail::format_records(t, 17));
}

SpectralTable1D build_and_save_table(int n, int K, const std::string& path, Precision prec) {
  if (prec == Precision::Extended) {
    std::vector<std::string> records;
    TablePrimariesT<double> t = detail::build_primaries_extended(n, K, 35, &records);
    write_cache(path, n, K, 35, records);
    return detail::finalize_table(std::move(t), 35);
  }
  SpectralTable1D table = build_spectral_table(n, K, prec);
  save_table(table, path);
  return table;
}

SpectralTable1D load_table(const std::string& path, int n, int K) {
  std::ifstream in(path);
  if (!in) fail("load_table: cannot open '" + path + "'");

  std::string magic;
  int fn = 0, fk = 0, digits = 0;
  if (!(in >> magic >> fn >> fk >> digits)) fail("load_table: malformed header in '" + path + "'");
  if (magic != "SFEM1") fail("load_table: unsupported format '" + magic + "' in '" + path + "'");
  if (fn != n || fk != K)
    fail("load_table: file holds order " + std::to_string(fn) + ", elements " + std::to_string(fk) +
         " but order " + std::to_string(n) + ", elements " + std::to_string(K) + " were requested");
  require(n >= 1 && K >= 2 && n <= kMaxOrder, "load_table: header values out of range");

  const int m = n - 1;
  TablePrimariesT<double> t;
  t.order = n;
  t.elements = K;
  t.element = build_element_matrices<double>(n, kMaxOrder);
  t.theta.resize(K - 1);
  for (int k = 1; k < K; ++k) t.theta[k - 1] = std::cos(M_PI * k / static_cast<double>(K));
  t.values.resize(static_cast<size_t>(K - 1) * n);
  t.interior_vec.resize(static_cast<size_t>(K - 1) * n * m);
  t.norm_sq.resize(static_cast<size_t>(K - 1) * n);

  if (m > 0) {
    t.interior.order = n;
    t.interior.values.resize(m);
    t.interior.vectors = SmallMat<double>(m, m);
  }

  const size_t expected = static_cast<size_t>(n) * K - 1;
  for (size_t rec = 0; rec < expected; ++rec) {
    int k = 0, l = 0;
    double lambda = 0, norm = 0;
    if (!(in >> k >> l >> lambda))
      fail("load_table: truncated or corrupt record " + std::to_string(rec + 1) + " in '" + path + "'");
    std::vector<double> vec(m);
    for (int i = 0; i < m; ++i)
      if (!(in >> vec[i]))
        fail("load_table: truncated interior vector in record " + std::to_string(rec + 1));
    if (!(in >> norm)) fail("load_table: truncated record " + std::to_string(rec + 1));

    if (k == 0) {
      if (l < 1 || l > m) fail("load_table: zero-frequency record with bad index");
      t.interior.values[l - 1] = lambda;
      for (int i = 0; i < m; ++i) t.interior.vectors(i, l - 1) = vec[i];
    } else {
      if (k < 1 || k >= K || l < 1 || l > n) fail("load_table: record index out of range");
      const size_t idx = static_cast<size_t>(k - 1) * n + (l - 1);
      t.values[idx] = lambda;
      for (int i = 0; i < m; ++i) t.interior_vec[idx * m + i] = vec[i];
      t.norm_sq[idx] = norm;
    }
  }
  std::string trailing;
  if (in >> trailing) fail("load_table: unexpected trailing data in '" + path + "'");

  // Rebuild the derived interior data the file does not carry.
  if (m > 0) {
    const auto& sb = t.element.stiff_blocks;
    const auto& mb = t.element.mass_blocks;
    t.interior.parity.resize(m);
    t.interior.edge_stiff.resize(m);
    t.interior.edge_mass.resize(m);
    t.interior.edge_stiff_rev.resize(m);
    t.interior.edge_mass_rev.resize(m);
    for (int l = 1; l <= m; ++l) {
      const std::vector<double> e = t.interior.vector(l);
      double sym = 0, asym = 0;
      for (int i = 0; i < m; ++i) {
        sym += std::abs(e[i] - e[m - 1 - i]);
        asym += std::abs(e[i] + e[m - 1 - i]);
      }
      t.interior.parity[l - 1] = (sym <= asym) ? +1 : -1;
      t.interior.edge_stiff[l - 1] = dot(sb.edge, e);
      t.interior.edge_mass[l - 1] = dot(mb.edge, e);
      t.interior.edge_stiff_rev[l - 1] = dot(sb.edge_rev, e);
      t.interior.edge_mass_rev[l - 1] = dot(mb.edge_rev, e);
    }
    t.interior.parity_alternating = true;
    for (int l = 1; l <= m; ++l)
      if (t.interior.parity[l - 1] != ((l % 2 == 1) ? +1 : -1)) t.interior.parity_alternating = false;
  }
  return detail::finalize_table(std::move(t), digits);
}

GridFunction1D materialize_eigenvector(const SpectralTable1D& table, int k, int l) {
  const int n = table.order, K = table.elements, m = n - 1;
  require(k >= 0 && k < K, "materialize_eigenvector: frequency out of range");
  require(l >= 1 && l <= (k == 0 ? m : n), "materialize_eigenvector: branch out of range");

  GridFunction1D g = GridFunction1D::zeros(n, K);
  if (k == 0) {
    const std::vector<double> e = table.interior.vector(l);
    for (int j = 1; j <= K; ++j) {
      double* row = g.interior_at(j - 1);
      if (j % 2 == 1)
        for (int i = 0; i < m; ++i) row[i] = e[i];
      else
        for (int i = 0; i < m; ++i) row[i] = -e[m - 1 - i];
    }
    return g;
  }

  for (int j = 1; j < K; ++j) g.nodal[j] = std::sin(M_PI * k * j / static_cast<double>(K));
  const double* p = table.p.data() + table.pair_index(k, l) * m;
  for (int j = 1; j <= K; ++j) {
    const double s_left = std::sin(M_PI * k * (j - 1) / static_cast<double>(K));
    const double s_right = std::sin(M_PI * k * j / static_cast<double>(K));
    double* row = g.interior_at(j - 1);
    for (int i = 0; i < m; ++i) row[i] = p[i] * s_left + p[m - 1 - i] * s_right;
  }
  return g;
}

}  // namespace sfem
