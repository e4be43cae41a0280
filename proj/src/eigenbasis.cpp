#include "sfem/eigenbasis.hpp"

#include "sfem/trig.hpp"

namespace sfem {

void LineWork::resize_for(const SpectralTable1D& t) {
  // Sizes only; every buffer is fully overwritten before it is read.
  const int K = t.elements, m = t.interior_dim();
  if (static_cast<int>(nodal.size()) == K - 1 && static_cast<int>(center.size()) == m &&
      static_cast<int>(half_in.size()) == K)
    return;
  dst1 = trig::dst1_plan(K - 1);
  dst3 = trig::dst3_plan(K);
  dct3 = trig::dct3_plan(K);
  nodal.resize(K - 1);
  nodal_hat.resize(K - 1);
  fold.resize(static_cast<size_t>(m) * (K - 1));
  fold_hat.resize(static_cast<size_t>(m) * (K - 1));
  dvec.resize(static_cast<size_t>(K - 1) * m);
  half_in.resize(K);
  half_out.resize(static_cast<size_t>(m) * K);
  center.resize(m);
}

namespace lines {

namespace {

// Alternating-flip accumulation over elements: sum_j (-P)^(j-1) v_{j-1/2}.
void accumulate_alternating(const double* interior, int K, int m, double* out) {
  for (int i = 0; i < m; ++i) out[i] = 0.0;
  for (int j = 1; j <= K; ++j) {
    const double* row = interior + static_cast<size_t>(j - 1) * m;
    if (j % 2 == 1)
      for (int i = 0; i < m; ++i) out[i] += row[i];
    else
      for (int i = 0; i < m; ++i) out[i] -= row[m - 1 - i];
  }
}

// Pairwise-summed parity folds of the neighbor combinations
//   U_j = v_{j-1/2} + v_{j+1/2}  (independent even slots)
//   V_j = v_{j+1/2} - v_{j-1/2}  (independent odd slots)
// laid out slot-major so each slot is one contiguous DST-I input.
void build_folds(const double* interior, int K, int m, double* fold) {
  const int half = m / 2, ne = (m + 1) / 2;
  for (int j = 1; j < K; ++j) {
    const double* a = interior + static_cast<size_t>(j - 1) * m;
    const double* b = interior + static_cast<size_t>(j) * m;
    for (int i = 0; i < half; ++i) {
      const double u_i = a[i] + b[i], u_r = a[m - 1 - i] + b[m - 1 - i];
      const double v_i = b[i] - a[i], v_r = b[m - 1 - i] - a[m - 1 - i];
      fold[static_cast<size_t>(i) * (K - 1) + (j - 1)] = u_i + u_r;
      fold[static_cast<size_t>(ne + i) * (K - 1) + (j - 1)] = v_i - v_r;
    }
    if (m % 2 == 1) fold[static_cast<size_t>(half) * (K - 1) + (j - 1)] = a[half] + b[half];
  }
}

}  // namespace

void decompose_weighted(const SpectralTable1D& t, const double* nodal, const double* interior,
                        double* coeffs, LineWork& w) {
  const int n = t.order, K = t.elements, m = n - 1;
  const int ne = t.even_slots(), no = t.odd_slots();
  w.resize_for(t);

  if (m > 0) {
    accumulate_alternating(interior, K, m, w.center.data());
    for (int l = 1; l <= m; ++l) {
      double s = 0;
      for (int i = 0; i < m; ++i) s += w.center[i] * t.interior.vectors(i, l - 1);
      coeffs[l - 1] = s / K;
    }
  }

  const trig::Plan& plan = *w.dst1;
  plan.execute(nodal + 1, w.nodal_hat.data());
  if (m > 0) {
    build_folds(interior, K, m, w.fold.data());
    for (int s = 0; s < m; ++s)
      plan.execute(w.fold.data() + static_cast<size_t>(s) * (K - 1),
                   w.fold_hat.data() + static_cast<size_t>(s) * (K - 1));
  }

  for (int k = 1; k < K; ++k) {
    const double nodal_hat = w.nodal_hat[k - 1];
    double* out = coeffs + (m + static_cast<size_t>(k - 1) * n);
    const size_t base = t.pair_index(k, 1);
    for (int l = 0; l < n; ++l) {
      double num = nodal_hat;
      const double* pe = t.p_even.data() + (base + l) * ne;
      const double* po = t.p_odd.data() + (base + l) * no;
      for (int i = 0; i < ne; ++i) num += pe[i] * w.fold_hat[static_cast<size_t>(i) * (K - 1) + (k - 1)];
      for (int i = 0; i < no; ++i)
        num += po[i] * w.fold_hat[static_cast<size_t>(ne + i) * (K - 1) + (k - 1)];
      out[l] = num / t.norm_sq[base + l];
    }
  }
}

void decompose(const SpectralTable1D& t, const double* nodal, const double* interior, double* coeffs,
               LineWork& w) {
  const int n = t.order, K = t.elements, m = n - 1;
  const int ne = t.even_slots(), no = t.odd_slots();
  w.resize_for(t);

  if (m > 0) {
    accumulate_alternating(interior, K, m, w.center.data());
    const std::vector<double> cs = matvec(t.element.mass_blocks.interior, w.center);
    for (int l = 1; l <= m; ++l) {
      double s = 0;
      for (int i = 0; i < m; ++i) s += cs[i] * t.interior.vectors(i, l - 1);
      coeffs[l - 1] = s / K;
    }
  }

  const trig::Plan& plan = *w.dst1;
  plan.execute(nodal + 1, w.nodal_hat.data());
  if (m > 0) {
    build_folds(interior, K, m, w.fold.data());
    for (int s = 0; s < m; ++s)
      plan.execute(w.fold.data() + static_cast<size_t>(s) * (K - 1),
                   w.fold_hat.data() + static_cast<size_t>(s) * (K - 1));
  }

  for (int k = 1; k < K; ++k) {
    const double nodal_hat = w.nodal_hat[k - 1];
    double* out = coeffs + (m + static_cast<size_t>(k - 1) * n);
    const size_t base = t.pair_index(k, 1);
    for (int l = 0; l < n; ++l) {
      double num = t.nodal_weight[base + l] * nodal_hat;
      const double* qe = t.q_even.data() + (base + l) * ne;
      const double* qo = t.q_odd.data() + (base + l) * no;
      for (int i = 0; i < ne; ++i) num += qe[i] * w.fold_hat[static_cast<size_t>(i) * (K - 1) + (k - 1)];
      for (int i = 0; i < no; ++i)
        num += qo[i] * w.fold_hat[static_cast<size_t>(ne + i) * (K - 1) + (k - 1)];
      out[l] = num / t.norm_sq[base + l];
    }
  }
}

void synthesize(const SpectralTable1D& t, const double* coeffs, double* nodal, double* interior,
                LineWork& w) {
  const int n = t.order, K = t.elements, m = n - 1;
  const int ne = t.even_slots(), no = t.odd_slots();
  const int half = m / 2;
  w.resize_for(t);

  // Nodal part: one sine synthesis of the branch sums.
  for (int k = 1; k < K; ++k) {
    const double* in = coeffs + (m + static_cast<size_t>(k - 1) * n);
    double s = 0;
    for (int l = 0; l < n; ++l) s += in[l];
    w.nodal[k - 1] = s;
  }
  nodal[0] = 0.0;
  nodal[K] = 0.0;
  w.dst1->execute(w.nodal.data(), nodal + 1);

  if (m == 0) return;

  // Zero-frequency part alternates the flipped center vector over elements.
  for (int i = 0; i < m; ++i) {
    double s = 0;
    for (int l = 0; l < m; ++l) s += coeffs[l] * t.interior.vectors(i, l);
    w.center[i] = s;
  }
  for (int j = 1; j <= K; ++j) {
    double* row = interior + static_cast<size_t>(j - 1) * m;
    if (j % 2 == 1)
      for (int i = 0; i < m; ++i) row[i] = w.center[i];
    else
      for (int i = 0; i < m; ++i) row[i] = -w.center[m - 1 - i];
  }

  // Branch-weighted interior vectors per frequency.
  for (int k = 1; k < K; ++k) {
    const double* in = coeffs + (m + static_cast<size_t>(k - 1) * n);
    double* d = w.dvec.data() + static_cast<size_t>(k - 1) * m;
    const double* p = t.p.data() + t.pair_index(k, 1) * m;
    for (int i = 0; i < m; ++i) d[i] = 0.0;
    for (int l = 0; l < n; ++l) {
      const double c = in[l];
      const double* pl = p + static_cast<size_t>(l) * m;
      for (int i = 0; i < m; ++i) d[i] += c * pl[i];
    }
  }

  // Even slots go through the half-sample sine synthesis, odd slots through
  // the cosine one, with the half-frequency prefactors folded into the
  // inputs.
  const trig::Plan& sin_plan = *w.dst3;
  const trig::Plan& cos_plan = *w.dct3;
  for (int i = 0; i < ne; ++i) {
    for (int k = 1; k < K; ++k) {
      const double* d = w.dvec.data() + static_cast<size_t>(k - 1) * m;
      const double de = (i < half) ? 0.5 * (d[i] + d[m - 1 - i]) : d[half];
      w.half_in[k - 1] = 2.0 * t.half_cos[k - 1] * de;
    }
    w.half_in[K - 1] = 0.0;
    sin_plan.execute(w.half_in.data(), w.half_out.data() + static_cast<size_t>(i) * K);
  }
  for (int i = 0; i < no; ++i) {
    w.half_in[0] = 0.0;
    for (int k = 1; k < K; ++k) {
      const double* d = w.dvec.data() + static_cast<size_t>(k - 1) * m;
      const double d_odd = 0.5 * (d[i] - d[m - 1 - i]);
      w.half_in[k] = -2.0 * t.half_sin[k - 1] * d_odd;
    }
    cos_plan.execute(w.half_in.data(), w.half_out.data() + static_cast<size_t>(ne + i) * K);
  }

  for (int j = 1; j <= K; ++j) {
    double* row = interior + static_cast<size_t>(j - 1) * m;
    for (int i = 0; i < half; ++i) {
      const double e = w.half_out[static_cast<size_t>(i) * K + (j - 1)];
      const double o = w.half_out[static_cast<size_t>(ne + i) * K + (j - 1)];
      row[i] += e + o;
      row[m - 1 - i] += e - o;
    }
    if (m % 2 == 1) row[half] += w.half_out[static_cast<size_t>(half) * K + (j - 1)];
  }
}

void BlockWork::resize_for(const SpectralTable1D& t, int count) {
  // Sizes only; every buffer is fully overwritten before it is read.
  if (sized_elements == t.elements && sized_order == t.order && sized_count == count) return;
  const int K = t.elements, m = t.interior_dim();
  const size_t c = count;
  nodal_hat.resize(static_cast<size_t>(K - 1) * c);
  fold.resize(static_cast<size_t>(m) * (K - 1) * c);
  fold_hat.resize(static_cast<size_t>(m) * (K - 1) * c);
  dvec.resize(static_cast<size_t>(K - 1) * m * c);
  half_in.resize(static_cast<size_t>(K) * c);
  half_out.resize(static_cast<size_t>(K) * c);
  center.resize(static_cast<size_t>(m) * c);
  tmp.resize(c);
  dst1 = trig::dst1_batch_plan(K - 1, count);
  dst3 = trig::dst3_batch_plan(K, count);
  dct3 = trig::dct3_batch_plan(K, count);
  sized_elements = K;
  sized_order = t.order;
  sized_count = count;
}

void decompose_weighted_block(const SpectralTable1D& t, const double* nodal, const double* interior,
                              double* coeffs, int count, BlockWork& w) {
  const int n = t.order, K = t.elements, m = n - 1;
  const int ne = t.even_slots(), no = t.odd_slots();
  const int half = m / 2;
  const size_t c = count;
  w.resize_for(t, count);

  if (m > 0) {
    // Zero-frequency branch: alternating-flip accumulation over elements.
    std::fill(w.center.begin(), w.center.end(), 0.0);
    for (int j = 1; j <= K; ++j) {
      const double* row = interior + static_cast<size_t>(j - 1) * m * c;
      if (j % 2 == 1) {
        for (int i = 0; i < m; ++i)
          for (size_t b = 0; b < c; ++b) w.center[i * c + b] += row[i * c + b];
      } else {
        for (int i = 0; i < m; ++i)
          for (size_t b = 0; b < c; ++b) w.center[i * c + b] -= row[(m - 1 - i) * c + b];
      }
    }
    for (int l = 1; l <= m; ++l) {
      double* out = coeffs + static_cast<size_t>(l - 1) * c;
      for (size_t b = 0; b < c; ++b) out[b] = 0.0;
      for (int i = 0; i < m; ++i) {
        const double e = t.interior.vectors(i, l - 1);
        for (size_t b = 0; b < c; ++b) out[b] += e * w.center[i * c + b];
      }
      for (size_t b = 0; b < c; ++b) out[b] /= K;
    }

    // Neighbour-combination folds, one slab per independent parity slot.
    for (int j = 1; j < K; ++j) {
      const double* a = interior + static_cast<size_t>(j - 1) * m * c;
      const double* d = interior + static_cast<size_t>(j) * m * c;
      for (int i = 0; i < half; ++i) {
        double* fe = w.fold.data() + (static_cast<size_t>(i) * (K - 1) + (j - 1)) * c;
        double* fo = w.fold.data() + (static_cast<size_t>(ne + i) * (K - 1) + (j - 1)) * c;
        const double* ai = a + static_cast<size_t>(i) * c;
        const double* di = d + static_cast<size_t>(i) * c;
        const double* ar = a + static_cast<size_t>(m - 1 - i) * c;
        const double* dr = d + static_cast<size_t>(m - 1 - i) * c;
        for (size_t b = 0; b < c; ++b) {
          fe[b] = ai[b] + di[b] + ar[b] + dr[b];
          fo[b] = (di[b] - ai[b]) - (dr[b] - ar[b]);
        }
      }
      if (m % 2 == 1) {
        double* fe = w.fold.data() + (static_cast<size_t>(half) * (K - 1) + (j - 1)) * c;
        const double* ai = a + static_cast<size_t>(half) * c;
        const double* di = d + static_cast<size_t>(half) * c;
        for (size_t b = 0; b < c; ++b) fe[b] = ai[b] + di[b];
      }
    }
    for (int s = 0; s < m; ++s)
      w.dst1->execute(w.fold.data() + static_cast<size_t>(s) * (K - 1) * c,
                      w.fold_hat.data() + static_cast<size_t>(s) * (K - 1) * c);
  }

  w.dst1->execute(nodal + c, w.nodal_hat.data());

  for (int k = 1; k < K; ++k) {
    const double* nh = w.nodal_hat.data() + static_cast<size_t>(k - 1) * c;
    const size_t base = t.pair_index(k, 1);
    for (int l = 0; l < n; ++l) {
      const double* pe = t.p_even.data() + (base + l) * ne;
      const double* po = t.p_odd.data() + (base + l) * no;
      double* out = coeffs + (m + static_cast<size_t>(k - 1) * n + l) * c;
      const double inv_norm = 1.0 / t.norm_sq[base + l];
      for (size_t b = 0; b < c; ++b) out[b] = nh[b];
      for (int i = 0; i < ne; ++i) {
        const double* fh = w.fold_hat.data() + (static_cast<size_t>(i) * (K - 1) + (k - 1)) * c;
        const double pi = pe[i];
        for (size_t b = 0; b < c; ++b) out[b] += pi * fh[b];
      }
      for (int i = 0; i < no; ++i) {
        const double* fh = w.fold_hat.data() + (static_cast<size_t>(ne + i) * (K - 1) + (k - 1)) * c;
        const double pi = po[i];
        for (size_t b = 0; b < c; ++b) out[b] += pi * fh[b];
      }
      for (size_t b = 0; b < c; ++b) out[b] *= inv_norm;
    }
  }
}

void synthesize_block(const SpectralTable1D& t, const double* coeffs, double* nodal, double* interior,
                      int count, BlockWork& w) {
  const int n = t.order, K = t.elements, m = n - 1;
  const int ne = t.even_slots(), no = t.odd_slots();
  const int half = m / 2;
  const size_t c = count;
  w.resize_for(t, count);

  // Nodal part: branch sums, one batched sine synthesis.
  for (int k = 1; k < K; ++k) {
    const double* in = coeffs + (m + static_cast<size_t>(k - 1) * n) * c;
    double* s = w.nodal_hat.data() + static_cast<size_t>(k - 1) * c;
    for (size_t b = 0; b < c; ++b) s[b] = in[b];
    for (int l = 1; l < n; ++l)
      for (size_t b = 0; b < c; ++b) s[b] += in[l * c + b];
  }
  std::fill(nodal, nodal + c, 0.0);
  std::fill(nodal + static_cast<size_t>(K) * c, nodal + static_cast<size_t>(K + 1) * c, 0.0);
  w.dst1->execute(w.nodal_hat.data(), nodal + c);

  if (m == 0) return;

  // Zero-frequency part alternates the flipped center vector over elements.
  for (int i = 0; i < m; ++i) {
    double* s = w.center.data() + static_cast<size_t>(i) * c;
    for (size_t b = 0; b < c; ++b) s[b] = 0.0;
    for (int l = 0; l < m; ++l) {
      const double e = t.interior.vectors(i, l);
      const double* in = coeffs + static_cast<size_t>(l) * c;
      for (size_t b = 0; b < c; ++b) s[b] += e * in[b];
    }
  }
  for (int j = 1; j <= K; ++j) {
    double* row = interior + static_cast<size_t>(j - 1) * m * c;
    if (j % 2 == 1) {
      for (int i = 0; i < m; ++i)
        for (size_t b = 0; b < c; ++b) row[i * c + b] = w.center[i * c + b];
    } else {
      for (int i = 0; i < m; ++i)
        for (size_t b = 0; b < c; ++b) row[i * c + b] = -w.center[(m - 1 - i) * c + b];
    }
  }

  // Branch-weighted interior vectors per frequency.
  for (int k = 1; k < K; ++k) {
    const double* in = coeffs + (m + static_cast<size_t>(k - 1) * n) * c;
    double* d = w.dvec.data() + static_cast<size_t>(k - 1) * m * c;
    const double* p = t.p.data() + t.pair_index(k, 1) * m;
    for (int i = 0; i < m; ++i)
      for (size_t b = 0; b < c; ++b) d[i * c + b] = 0.0;
    for (int l = 0; l < n; ++l) {
      const double* pl = p + static_cast<size_t>(l) * m;
      const double* cl = in + static_cast<size_t>(l) * c;
      for (int i = 0; i < m; ++i) {
        const double pi = pl[i];
        for (size_t b = 0; b < c; ++b) d[i * c + b] += pi * cl[b];
      }
    }
  }

  // Even slots through the half-sample sine synthesis, odd slots through the
  // cosine one, prefactors folded into the inputs.
  for (int i = 0; i < ne; ++i) {
    for (int k = 1; k < K; ++k) {
      const double* d = w.dvec.data() + static_cast<size_t>(k - 1) * m * c;
      double* in = w.half_in.data() + static_cast<size_t>(k - 1) * c;
      const double tw = 2.0 * t.half_cos[k - 1];
      if (i < half) {
        const double* di = d + static_cast<size_t>(i) * c;
        const double* dr = d + static_cast<size_t>(m - 1 - i) * c;
        for (size_t b = 0; b < c; ++b) in[b] = tw * 0.5 * (di[b] + dr[b]);
      } else {
        const double* di = d + static_cast<size_t>(half) * c;
        for (size_t b = 0; b < c; ++b) in[b] = tw * di[b];
      }
    }
    std::fill(w.half_in.begin() + static_cast<size_t>(K - 1) * c, w.half_in.end(), 0.0);
    w.dst3->execute(w.half_in.data(), w.half_out.data());
    for (int j = 1; j <= K; ++j) {
      double* row = interior + static_cast<size_t>(j - 1) * m * c;
      const double* e = w.half_out.data() + static_cast<size_t>(j - 1) * c;
      if (i < half) {
        for (size_t b = 0; b < c; ++b) {
          row[i * c + b] += e[b];
          row[(m - 1 - i) * c + b] += e[b];
        }
      } else {
        for (size_t b = 0; b < c; ++b) row[half * c + b] += e[b];
      }
    }
  }
  for (int i = 0; i < no; ++i) {
    std::fill(w.half_in.begin(), w.half_in.begin() + c, 0.0);
    for (int k = 1; k < K; ++k) {
      const double* d = w.dvec.data() + static_cast<size_t>(k - 1) * m * c;
      double* in = w.half_in.data() + static_cast<size_t>(k) * c;
      const double tw = -2.0 * t.half_sin[k - 1];
      const double* di = d + static_cast<size_t>(i) * c;
      const double* dr = d + static_cast<size_t>(m - 1 - i) * c;
      for (size_t b = 0; b < c; ++b) in[b] = tw * 0.5 * (di[b] - dr[b]);
    }
    w.dct3->execute(w.half_in.data(), w.half_out.data());
    for (int j = 1; j <= K; ++j) {
      double* row = interior + static_cast<size_t>(j - 1) * m * c;
      const double* o = w.half_out.data() + static_cast<size_t>(j - 1) * c;
      for (size_t b = 0; b < c; ++b) {
        row[i * c + b] += o[b];
        row[(m - 1 - i) * c + b] -= o[b];
      }
    }
  }
}

}  // namespace lines

GridFunction1D synthesize(const CoefficientArray1D& coeffs, const SpectralTable1D& table) {
  require(coeffs.order == table.order && coeffs.elements == table.elements,
          "synthesize: coefficient array does not match the table");
  GridFunction1D g = GridFunction1D::zeros(table.order, table.elements);
  LineWork work;
  lines::synthesize(table, coeffs.data.data(), g.nodal.data(), g.interior.data(), work);
  return g;
}

CoefficientArray1D decompose_weighted(const GridFunction1D& y, const SpectralTable1D& table) {
  require(y.order == table.order && y.elements == table.elements,
          "decompose_weighted: grid function does not match the table");
  CoefficientArray1D c = CoefficientArray1D::zeros(table.order, table.elements);
  LineWork work;
  lines::decompose_weighted(table, y.nodal.data(), y.interior.data(), c.data.data(), work);
  return c;
}

CoefficientArray1D decompose(const GridFunction1D& w, const SpectralTable1D& table, DirectRoute route) {
  require(w.order == table.order && w.elements == table.elements,
          "decompose: grid function does not match the table");
  if (route == DirectRoute::MassApply)
    return decompose_weighted(apply_mass_1d(w, table.element), table);
  CoefficientArray1D c = CoefficientArray1D::zeros(table.order, table.elements);
  LineWork work;
  lines::decompose(table, w.nodal.data(), w.interior.data(), c.data.data(), work);
  return c;
}

}  // namespace sfem
