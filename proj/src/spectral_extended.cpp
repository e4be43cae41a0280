// Extended-precision generation paths. Kept in one translation unit so the
// multiprecision instantiation is compiled exactly once.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <iomanip>
#include <sstream>

#include "sfem/spectral.hpp"

namespace sfem {

using float50 = boost::multiprecision::cpp_bin_float_50;

namespace detail {

AssumptionReport assumption_report_extended(int n, double separation_tol) {
  return assumption_report_impl<float50>(n, separation_tol, false);
}

TablePrimariesT<double> build_primaries_extended(int n, int K, int digits,
                                                 std::vector<std::string>* records) {
  const TablePrimariesT<float50> hp = build_table_primaries<float50>(n, K, kMaxOrder);
  const int m = n - 1;

  TablePrimariesT<double> t;
  t.order = n;
  t.elements = K;
  t.element = build_element_matrices<double>(n, kMaxOrder);
  if (n >= 2) {
    // Round the high-precision interior eigensystem rather than recomputing
    // it, so the table and any cache written from it agree.
    t.interior.order = n;
    t.interior.values.resize(m);
    t.interior.vectors = SmallMat<double>(m, m);
    t.interior.parity = hp.interior.parity;
    t.interior.parity_alternating = hp.interior.parity_alternating;
    t.interior.edge_stiff.resize(m);
    t.interior.edge_mass.resize(m);
    t.interior.edge_stiff_rev.resize(m);
    t.interior.edge_mass_rev.resize(m);
    for (int l = 0; l < m; ++l) {
      t.interior.values[l] = static_cast<double>(hp.interior.values[l]);
      t.interior.edge_stiff[l] = static_cast<double>(hp.interior.edge_stiff[l]);
      t.interior.edge_mass[l] = static_cast<double>(hp.interior.edge_mass[l]);
      t.interior.edge_stiff_rev[l] = static_cast<double>(hp.interior.edge_stiff_rev[l]);
      t.interior.edge_mass_rev[l] = static_cast<double>(hp.interior.edge_mass_rev[l]);
      for (int i = 0; i < m; ++i)
        t.interior.vectors(i, l) = static_cast<double>(hp.interior.vectors(i, l));
    }
  }
  t.theta.resize(hp.theta.size());
  t.values.resize(hp.values.size());
  t.interior_vec.resize(hp.interior_vec.size());
  t.norm_sq.resize(hp.norm_sq.size());
  for (size_t i = 0; i < hp.theta.size(); ++i) t.theta[i] = static_cast<double>(hp.theta[i]);
  for (size_t i = 0; i < hp.values.size(); ++i) t.values[i] = static_cast<double>(hp.values[i]);
  for (size_t i = 0; i < hp.interior_vec.size(); ++i)
    t.interior_vec[i] = static_cast<double>(hp.interior_vec[i]);
  for (size_t i = 0; i < hp.norm_sq.size(); ++i) t.norm_sq[i] = static_cast<double>(hp.norm_sq[i]);

  if (records) {
    records->clear();
    records->reserve(static_cast<size_t>(n) * K - 1);
    const auto num = [&](const float50& v) {
      std::ostringstream os;
      os << " " << std::setprecision(digits) << v;
      return os.str();
    };
    for (int l = 1; l <= m; ++l) {
      std::string line = "0 " + std::to_string(l) + num(hp.interior.values[l - 1]);
      for (int i = 0; i < m; ++i) line += num(hp.interior.vectors(i, l - 1));
      line += num(float50(K));
      records->push_back(std::move(line));
    }
    for (int k = 1; k < K; ++k)
      for (int l = 1; l <= n; ++l) {
        const size_t idx = static_cast<size_t>(k - 1) * n + (l - 1);
        std::string line = std::to_string(k) + " " + std::to_string(l) + num(hp.values[idx]);
        for (int i = 0; i < m; ++i) line += num(hp.interior_vec[idx * m + i]);
        line += num(hp.norm_sq[idx]);
        records->push_back(std::move(line));
      }
  }
  return t;
}

}  // namespace detail
}  // namespace sfem
