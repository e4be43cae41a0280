#include "sfem/poisson.hpp"

#include <chrono>
#include <cstdlib>
#include <mutex>
#include <cmath>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sfem/banded.hpp"
#include "sfem/eigenbasis.hpp"
#include "sfem/trig.hpp"
#include "sfem/grid1d.hpp"

namespace sfem {

std::vector<AxisSpec> ProblemSpec::axis_specs() const {
  std::vector<AxisSpec> axes(dimension);
  for (int i = 0; i < dimension; ++i) axes[i] = AxisSpec{elements[i], orders[i]};
  return axes;
}

double ProblemSpec::shift_lower_bound() const {
  double s = 0;
  for (double x : lengths) s += 1.0 / (x * x);
  return -M_PI * M_PI * s;
}

void ProblemSpec::validate() const {
  require(dimension >= 1, "problem: dimension must be at least 1");
  require(static_cast<int>(lengths.size()) == dimension &&
              static_cast<int>(elements.size()) == dimension &&
              static_cast<int>(orders.size()) == dimension,
          "problem: lengths/elements/orders must all have `dimension` entries");
  for (int i = 0; i < dimension; ++i) {
    require(lengths[i] > 0, "problem: box length must be positive (axis " + std::to_string(i + 1) + ")");
    require(elements[i] >= 2, "problem: need at least 2 elements (axis " + std::to_string(i + 1) + ")");
    require(orders[i] >= 1 && orders[i] <= kMaxOrderDouble,
            "problem: order out of range (axis " + std::to_string(i + 1) + ")");
  }
  if (!(shift > shift_lower_bound()))
    fail("problem: shift " + std::to_string(shift) + " must exceed " +
         std::to_string(shift_lower_bound()) + " for a positive definite operator");
}

const SpectralTable1D& TableSet::get(int order, int elements) {
  const auto key = std::make_pair(order, elements);
  auto it = tables_.find(key);
  if (it != tables_.end()) return *it->second;

  std::unique_ptr<SpectralTable1D> table;
  const std::string path = cache_dir_.empty()
                               ? std::string()
                               : cache_dir_ + "/sfem_table_n" + std::to_string(order) + "_K" +
                                     std::to_string(elements) + ".txt";
  if (!path.empty()) {
    try {
      table = std::make_unique<SpectralTable1D>(load_table(path, order, elements));
    } catch (const Error&) {
      table.reset();  // absent or stale cache entry; rebuild below
    }
  }
  if (!table) {
    if (!path.empty() && write_cache_)
      table = std::make_unique<SpectralTable1D>(build_and_save_table(order, elements, path, precision_));
    else
      table = std::make_unique<SpectralTable1D>(build_spectral_table(order, elements, precision_));
  }
  return *tables_.emplace(key, std::move(table)).first->second;
}

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

void apply_thread_limit(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

// ---------------------------------------------------------------------------
// Axis-by-axis transform sweeps.
//
// During a solve, each axis is either still in grid form (nodal and interior
// classes) or transformed (one coefficient dimension of extent n*K-1). The
// arrays live in a mask-indexed set like GridFunctionND; transforming an
// axis merges the two classes that differ in that bit.
// ---------------------------------------------------------------------------

// Retired sweep buffers, kept across solves so repeated large solves do not
// cycle pages through the OS. Bounded count; biggest buffers are kept.
class BufferPool {
 public:
  std::vector<double> take(size_t size) {
    std::scoped_lock lock(mu_);
    for (size_t i = 0; i < pool_.size(); ++i) {
      if (pool_[i].capacity() >= size) {
        std::vector<double> v = std::move(pool_[i]);
        pool_.erase(pool_.begin() + i);
        v.resize(size);
        return v;
      }
    }
    if (!pool_.empty()) {
      std::vector<double> v = std::move(pool_.back());
      pool_.pop_back();
      v.resize(size);
      return v;
    }
    return std::vector<double>(size);
  }

  void retire(std::vector<double>&& v) {
    if (v.empty()) return;
    std::scoped_lock lock(mu_);
    pool_.push_back(std::move(v));
    if (pool_.size() > kMaxEntries) {
      auto smallest = pool_.begin();
      for (auto it = pool_.begin(); it != pool_.end(); ++it)
        if (it->capacity() < smallest->capacity()) smallest = it;
      pool_.erase(smallest);
    }
  }

 private:
  static constexpr size_t kMaxEntries = 12;
  std::mutex mu_;
  std::vector<std::vector<double>> pool_;
};

BufferPool& buffer_pool() {
  static BufferPool p;
  return p;
}

struct SweepState {
  std::vector<AxisSpec> axes;
  std::vector<char> transformed;
  std::vector<std::vector<double>> arr;        // indexed by class mask
  std::vector<const std::vector<double>*> src;  // initial data, read until replaced

  const std::vector<double>& read(unsigned mask) const {
    return arr[mask].empty() && src[mask] ? *src[mask] : arr[mask];
  }

  std::vector<double> take(size_t size) { return buffer_pool().take(size); }
  void retire(std::vector<double>&& v) { buffer_pool().retire(std::move(v)); }

  int dim() const { return static_cast<int>(axes.size()); }

  std::vector<int> extents(unsigned mask) const {
    std::vector<int> ext(axes.size());
    for (int i = 0; i < dim(); ++i)
      ext[i] = transformed[i] ? axes[i].dof_extent()
                              : ((mask >> i & 1u) ? axes[i].interior_extent() : axes[i].nodal_extent());
    return ext;
  }

  bool mask_valid(unsigned mask) const {
    for (int i = 0; i < dim(); ++i)
      if (transformed[i] && (mask >> i & 1u)) return false;
    return true;
  }
};

SweepState state_from_grid(const GridFunctionND& g) {
  SweepState s;
  s.axes = g.axes;
  s.transformed.assign(g.axes.size(), 0);
  s.arr.resize(g.classes.size());
  s.src.resize(g.classes.size());
  for (unsigned mask = 0; mask < g.classes.size(); ++mask) s.src[mask] = &g.classes[mask];
  return s;
}

GridFunctionND state_to_grid(SweepState&& s) {
  GridFunctionND g;
  g.axes = s.axes;
  for (unsigned mask = 0; mask < s.arr.size(); ++mask)
    if (s.arr[mask].empty() && s.src[mask]) s.arr[mask] = *s.src[mask];
  g.classes = std::move(s.arr);
  return g;
}

struct LineBuffers {
  std::vector<double> nodal, interior, coeff;
  LineWork work;
  lines::BlockWork block_work;

  void resize_for(const AxisSpec& axis, int block) {
    // Sizes only; the kernels overwrite every entry they read.
    const size_t n = static_cast<size_t>(block) * axis.nodal_extent();
    if (nodal.size() != n) {
      nodal.resize(n);
      interior.resize(static_cast<size_t>(block) * axis.interior_extent());
      coeff.resize(static_cast<size_t>(block) * axis.dof_extent());
    }
  }
};

void gather_line(const double* src, std::int64_t stride, int count, double* dst) {
  if (stride == 1) {
    std::copy(src, src + count, dst);
    return;
  }
  for (int i = 0; i < count; ++i) dst[i] = src[i * stride];
}

// Slot-major tile gather/scatter: `cnt` adjacent lines (unit spacing) of
// length `len` with stride `stride`. Row j of the tile holds the cnt values
// of position j, so both sides move whole cache lines.
void gather_tile(const double* src, std::int64_t stride, int len, int cnt, double* tile) {
  for (int j = 0; j < len; ++j)
    std::copy(src + j * stride, src + j * stride + cnt, tile + static_cast<size_t>(j) * cnt);
}

void scatter_tile(const double* tile, int len, int cnt, double* dst, std::int64_t stride) {
  for (int j = 0; j < len; ++j)
    std::copy(tile + static_cast<size_t>(j) * cnt, tile + static_cast<size_t>(j) * cnt + cnt,
              dst + j * stride);
}

inline constexpr int kLineBlock = 32;

void scatter_line(const double* src, int count, double* dst, std::int64_t stride) {
  if (stride == 1) {
    std::copy(src, src + count, dst);
    return;
  }
  for (int i = 0; i < count; ++i) dst[i * stride] = src[i];
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int thread_id() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

// Grid form -> coefficient form along `axis` (always the mass-weighted
// analysis; the plain analysis is not needed on the solve path).
void forward_axis(SweepState& s, int axis, const SpectralTable1D& table) {
  const unsigned bit = 1u << axis;
  const AxisSpec ax = s.axes[axis];
  // Warm the plan cache before going parallel.
  trig::dst1_plan(ax.elements - 1);

  std::vector<std::vector<double>> next(s.arr.size());
  for (unsigned mask = 0; mask < s.arr.size(); ++mask) {
    if (!s.mask_valid(mask) || (mask & bit)) continue;
    const TensorShape sh_nodal(s.extents(mask));
    const TensorShape sh_inter(s.extents(mask | bit));

    std::vector<int> out_ext = sh_nodal.extent;
    out_ext[axis] = ax.dof_extent();
    const TensorShape sh_out(out_ext);
    std::vector<double> out = s.take(sh_out.total);

    const std::int64_t lines = nd::line_count(sh_out, axis);
    const double* in_nodal = s.read(mask).data();
    const double* in_inter = s.read(mask | bit).data();
    double* out_ptr = out.data();

    const bool contiguous = sh_nodal.stride[axis] == 1;
    std::vector<LineBuffers> buffers(max_threads());
    if (contiguous) {
#pragma omp parallel for schedule(static)
      for (std::int64_t r = 0; r < lines; ++r) {
        LineBuffers& b = buffers[thread_id()];
        b.resize_for(ax, 1);
        lines::decompose_weighted(table, in_nodal + nd::line_offset(sh_nodal, axis, r),
                                  in_inter + nd::line_offset(sh_inter, axis, r),
                                  out_ptr + nd::line_offset(sh_out, axis, r), b.work);
      }
    } else {
      // Lines adjacent in the reduced index are unit-spaced in memory; move
      // them as slot-major tiles and run the batched kernel per tile.
      const std::int64_t row_len = sh_out.extent.back();
      const std::int64_t rows = lines / row_len;
#pragma omp parallel for schedule(static)
      for (std::int64_t row = 0; row < rows; ++row) {
        LineBuffers& b = buffers[thread_id()];
        b.resize_for(ax, kLineBlock);
        const std::int64_t off_n = nd::line_offset(sh_nodal, axis, row * row_len);
        const std::int64_t off_i = nd::line_offset(sh_inter, axis, row * row_len);
        const std::int64_t off_o = nd::line_offset(sh_out, axis, row * row_len);
        for (std::int64_t c = 0; c < row_len; c += kLineBlock) {
          const int cnt = static_cast<int>(std::min<std::int64_t>(kLineBlock, row_len - c));
          gather_tile(in_nodal + off_n + c, sh_nodal.stride[axis], sh_nodal.extent[axis], cnt,
                      b.nodal.data());
          gather_tile(in_inter + off_i + c, sh_inter.stride[axis], sh_inter.extent[axis], cnt,
                      b.interior.data());
          lines::decompose_weighted_block(table, b.nodal.data(), b.interior.data(), b.coeff.data(),
                                          cnt, b.block_work);
          scatter_tile(b.coeff.data(), sh_out.extent[axis], cnt, out_ptr + off_o + c,
                       sh_out.stride[axis]);
        }
      }
    }
    next[mask] = std::move(out);
    s.retire(std::move(s.arr[mask]));
    s.retire(std::move(s.arr[mask | bit]));
  }
  for (unsigned mask = 0; mask < s.arr.size(); ++mask) {
    if (s.mask_valid(mask) && !(mask & bit))
      s.arr[mask] = std::move(next[mask]);
    else
      s.arr[mask] = std::vector<double>();
    s.src[mask] = nullptr;
  }
  s.transformed[axis] = 1;
}

// Coefficient form -> grid form along `axis`.
void inverse_axis(SweepState& s, int axis, const SpectralTable1D& table) {
  const unsigned bit = 1u << axis;
  const AxisSpec ax = s.axes[axis];
  trig::dst1_plan(ax.elements - 1);
  trig::dst3_plan(ax.elements);
  trig::dct3_plan(ax.elements);

  s.transformed[axis] = 0;
  for (unsigned mask = 0; mask < s.arr.size(); ++mask) {
    if (!s.mask_valid(mask) || (mask & bit)) continue;

    // The source array still has the coefficient extent along `axis`.
    std::vector<int> in_ext = s.extents(mask);
    in_ext[axis] = ax.dof_extent();
    const TensorShape sh_in(in_ext);
    const TensorShape sh_nodal(s.extents(mask));
    const TensorShape sh_inter(s.extents(mask | bit));

    std::vector<double> out_nodal = s.take(sh_nodal.total);
    std::vector<double> out_inter = s.take(sh_inter.total);
    std::vector<double> in = std::move(s.arr[mask]);
    const double* in_ptr = in.data();
    double* nodal_ptr = out_nodal.data();
    double* inter_ptr = out_inter.data();

    const std::int64_t lines = nd::line_count(sh_in, axis);
    const bool contiguous = sh_in.stride[axis] == 1;
    std::vector<LineBuffers> buffers(max_threads());
    if (contiguous) {
#pragma omp parallel for schedule(static)
      for (std::int64_t r = 0; r < lines; ++r) {
        LineBuffers& b = buffers[thread_id()];
        b.resize_for(ax, 1);
        lines::synthesize(table, in_ptr + nd::line_offset(sh_in, axis, r),
                          nodal_ptr + nd::line_offset(sh_nodal, axis, r),
                          inter_ptr + nd::line_offset(sh_inter, axis, r), b.work);
      }
    } else {
      const std::int64_t row_len = sh_in.extent.back();
      const std::int64_t rows = lines / row_len;
#pragma omp parallel for schedule(static)
      for (std::int64_t row = 0; row < rows; ++row) {
        LineBuffers& b = buffers[thread_id()];
        b.resize_for(ax, kLineBlock);
        const std::int64_t off_c = nd::line_offset(sh_in, axis, row * row_len);
        const std::int64_t off_n = nd::line_offset(sh_nodal, axis, row * row_len);
        const std::int64_t off_i = nd::line_offset(sh_inter, axis, row * row_len);
        for (std::int64_t c = 0; c < row_len; c += kLineBlock) {
          const int cnt = static_cast<int>(std::min<std::int64_t>(kLineBlock, row_len - c));
          gather_tile(in_ptr + off_c + c, sh_in.stride[axis], sh_in.extent[axis], cnt,
                      b.coeff.data());
          lines::synthesize_block(table, b.coeff.data(), b.nodal.data(), b.interior.data(), cnt,
                                  b.block_work);
          scatter_tile(b.nodal.data(), sh_nodal.extent[axis], cnt, nodal_ptr + off_n + c,
                       sh_nodal.stride[axis]);
          scatter_tile(b.interior.data(), sh_inter.extent[axis], cnt, inter_ptr + off_i + c,
                       sh_inter.stride[axis]);
        }
      }
    }
    s.retire(std::move(in));
    s.arr[mask] = std::move(out_nodal);
    s.arr[mask | bit] = std::move(out_inter);
  }
}

std::vector<double> axis_scale_factors(const ProblemSpec& spec) {
  std::vector<double> f(spec.dimension);
  for (int i = 0; i < spec.dimension; ++i) {
    const double h = spec.lengths[i] / spec.elements[i];
    f[i] = 4.0 / (h * h);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Stencil sweeps for operator application.
// ---------------------------------------------------------------------------

GridFunctionND apply_axis_stencil(const GridFunctionND& g, int axis, const ElementBlocks<double>& blocks) {
  const AxisSpec ax = g.axes[axis];
  const unsigned bit = 1u << axis;
  GridFunctionND out = GridFunctionND::zeros(g.axes);

  for (unsigned mask = 0; mask < g.classes.size(); ++mask) {
    if (mask & bit) continue;
    const TensorShape sh_nodal(g.class_extents(mask));
    const TensorShape sh_inter(g.class_extents(mask | bit));
    const std::int64_t lines = nd::line_count(sh_nodal, axis);

    const double* in_nodal = g.classes[mask].data();
    const double* in_inter = g.classes[mask | bit].data();
    double* out_nodal = out.classes[mask].data();
    double* out_inter = out.classes[mask | bit].data();

    std::vector<std::vector<double>> buffers(max_threads());
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < lines; ++r) {
      std::vector<double>& buf = buffers[thread_id()];
      const int n_nodal = sh_nodal.extent[axis], n_inter = sh_inter.extent[axis];
      buf.assign(2 * (n_nodal + n_inter), 0.0);
      double* vn = buf.data();
      double* vi = vn + n_nodal;
      double* yn = vi + n_inter;
      double* yi = yn + n_nodal;
      gather_line(in_nodal + nd::line_offset(sh_nodal, axis, r), sh_nodal.stride[axis], n_nodal, vn);
      gather_line(in_inter + nd::line_offset(sh_inter, axis, r), sh_inter.stride[axis], n_inter, vi);
      detail::apply_element_stencil(blocks, ax.order, ax.elements, vn, vi, yn, yi);
      scatter_line(yn, n_nodal, out_nodal + nd::line_offset(sh_nodal, axis, r), sh_nodal.stride[axis]);
      scatter_line(yi, n_inter, out_inter + nd::line_offset(sh_inter, axis, r), sh_inter.stride[axis]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Load averaging.
// ---------------------------------------------------------------------------

struct AxisQuadData {
  std::vector<double> nodes;     // Gauss nodes on [-1,1]
  std::vector<double> weighted;  // (n+1) x (n+1): weight * basis value, (loc, g)
};

AxisQuadData axis_quad(int order) {
  const auto rule = gauss_legendre<double>(order + 1);
  const auto nodes = equispaced_nodes<double>(order);
  AxisQuadData q;
  q.nodes = rule.nodes;
  q.weighted.assign(static_cast<size_t>(order + 1) * (order + 1), 0.0);
  for (int loc = 0; loc <= order; ++loc)
    for (int g = 0; g <= order; ++g)
      q.weighted[static_cast<size_t>(loc) * (order + 1) + g] =
          rule.weights[g] * lagrange_value(nodes, loc, rule.nodes[g]);
  return q;
}

}  // namespace

GridFunctionND fem_load_average(const ProblemSpec& spec) {
  spec.validate();
  require(static_cast<bool>(spec.rhs), "fem_load_average: no right-hand side configured");
  const int N = spec.dimension;
  GridFunctionND load = GridFunctionND::zeros(spec.axis_specs());

  std::vector<AxisQuadData> quad(N);
  std::vector<int> pts(N);
  std::int64_t tensor = 1;
  for (int i = 0; i < N; ++i) {
    quad[i] = axis_quad(spec.orders[i]);
    pts[i] = spec.orders[i] + 1;
    tensor *= pts[i];
  }
  std::vector<TensorShape> class_shapes;
  for (unsigned mask = 0; mask < load.classes.size(); ++mask)
    class_shapes.emplace_back(load.class_extents(mask));

  std::vector<double> values(tensor), scratch(tensor);
  std::vector<int> e(N, 0), gidx(N, 0), lidx(N, 0);
  std::vector<double> x(N);

  const std::int64_t element_total = [&] {
    std::int64_t t = 1;
    for (int i = 0; i < N; ++i) t *= spec.elements[i];
    return t;
  }();

  for (std::int64_t eflat = 0; eflat < element_total; ++eflat) {
    // Evaluate f on the tensor Gauss grid of this element.
    std::fill(gidx.begin(), gidx.end(), 0);
    for (std::int64_t g = 0; g < tensor; ++g) {
      for (int i = 0; i < N; ++i) {
        const double h = spec.lengths[i] / spec.elements[i];
        x[i] = (e[i] + 0.5 * (quad[i].nodes[gidx[i]] + 1.0)) * h;
      }
      values[g] = spec.rhs(x);
      for (int i = N - 1; i >= 0; --i) {
        if (++gidx[i] < pts[i]) break;
        gidx[i] = 0;
      }
    }

    // Contract each axis with its weighted basis matrix.
    for (int axis = N - 1; axis >= 0; --axis) {
      std::int64_t inner = 1, outer = 1;
      for (int i = axis + 1; i < N; ++i) inner *= pts[i];
      for (int i = 0; i < axis; ++i) outer *= pts[i];
      const int s = pts[axis];
      for (std::int64_t o = 0; o < outer; ++o)
        for (int loc = 0; loc < s; ++loc)
          for (std::int64_t in = 0; in < inner; ++in) {
            double acc = 0;
            const double* w = quad[axis].weighted.data() + static_cast<size_t>(loc) * s;
            for (int g = 0; g < s; ++g) acc += w[g] * values[(o * s + g) * inner + in];
            scratch[(o * s + loc) * inner + in] = acc;
          }
      std::swap(values, scratch);
    }

    // Scatter the local load into the parity-class arrays; boundary node
    // contributions are dropped (homogeneous Dirichlet test space).
    std::fill(lidx.begin(), lidx.end(), 0);
    for (std::int64_t l = 0; l < tensor; ++l) {
      unsigned mask = 0;
      bool keep = true;
      for (int i = 0; i < N && keep; ++i) {
        const int loc = lidx[i], n = spec.orders[i], K = spec.elements[i];
        if (loc == 0) {
          if (e[i] == 0) keep = false;
        } else if (loc == n) {
          if (e[i] + 1 == K) keep = false;
        } else {
          mask |= 1u << i;
        }
      }
      if (keep) {
        std::int64_t flat = 0;
        for (int i = 0; i < N; ++i) {
          const int loc = lidx[i], n = spec.orders[i];
          const int idx = (loc == 0) ? e[i] : (loc == n ? e[i] + 1 : e[i] * (n - 1) + loc - 1);
          flat += idx * class_shapes[mask].stride[i];
        }
        load.classes[mask][flat] += values[l];
      }
      for (int i = N - 1; i >= 0; --i) {
        if (++lidx[i] < pts[i]) break;
        lidx[i] = 0;
      }
    }

    for (int i = N - 1; i >= 0; --i) {
      if (++e[i] < spec.elements[i]) break;
      e[i] = 0;
    }
  }
  load.enforce_boundary();
  return load;
}

namespace detail {

void scale_by_symbol(std::vector<double>& coeffs, const TensorShape& shape,
                     const std::vector<std::vector<double>>& axis_eigenvalues,
                     const std::vector<double>& axis_factors, double shift,
                     std::span<const int> orders) {
  const int N = static_cast<int>(shape.extent.size());
  // Scaled symbol contribution of the last axis, reused across rows.
  const int last_extent = shape.extent[N - 1];
  std::vector<double> last(last_extent);
  for (int t = 0; t < last_extent; ++t) last[t] = axis_factors[N - 1] * axis_eigenvalues[N - 1][t];

  bool trouble = false;
  std::vector<int> ridx(N, 0);
  for (std::int64_t row = 0; row < shape.total / last_extent && !trouble; ++row) {
    double base = shift;
    for (int i = 0; i + 1 < N; ++i) base += axis_factors[i] * axis_eigenvalues[i][ridx[i]];
    double* out = coeffs.data() + row * last_extent;
    double min_denom = std::numeric_limits<double>::infinity();
    for (int t = 0; t < last_extent; ++t) {
      const double denom = base + last[t];
      min_denom = std::min(min_denom, denom);
      out[t] /= denom;
    }
    trouble = !(min_denom > 0);
    for (int i = N - 2; i >= 0; --i) {
      if (++ridx[i] < shape.extent[i]) break;
      ridx[i] = 0;
    }
  }
  if (!trouble) return;

  // Redo the scan element by element to report the offending index.
  std::vector<int> idx(N, 0);
  for (std::int64_t flat = 0; flat < shape.total; ++flat) {
    double denom = shift;
    for (int i = 0; i < N; ++i) denom += axis_factors[i] * axis_eigenvalues[i][idx[i]];
    if (!(denom > 0)) {
      std::string where;
      for (int i = 0; i < N; ++i) {
        const int n = orders[i];
        int k, l;
        if (idx[i] < n - 1) {
          k = 0;
          l = idx[i] + 1;
        } else {
          k = (idx[i] - (n - 1)) / n + 1;
          l = (idx[i] - (n - 1)) % n + 1;
        }
        where += (i ? ", " : "") + std::string("k") + std::to_string(i + 1) + "=" +
                 std::to_string(k) + " l" + std::to_string(i + 1) + "=" + std::to_string(l);
      }
      fail("solve: nonpositive denominator " + std::to_string(denom) + " at (" + where +
           "); shift too negative");
    }
    for (int i = N - 1; i >= 0; --i) {
      if (++idx[i] < shape.extent[i]) break;
      idx[i] = 0;
    }
  }
}

}  // namespace detail

namespace {

SolveReport run_full_diagonalization(const ProblemSpec& spec, const GridFunctionND& load,
                                     TableSet& tables) {
  const int N = spec.dimension;
  const bool prof = std::getenv("SFEM_PROFILE") != nullptr;
  std::vector<const SpectralTable1D*> table(N);
  for (int i = 0; i < N; ++i) table[i] = &tables.get(spec.orders[i], spec.elements[i]);

  SweepState state = state_from_grid(load);
  for (int axis = 0; axis < N; ++axis) {
    const double t0 = now_seconds();
    forward_axis(state, axis, *table[axis]);
    if (prof) std::fprintf(stderr, "  fwd axis %d: %.4f s\n", axis, now_seconds() - t0);
  }

  std::vector<std::vector<double>> eigs(N);
  for (int i = 0; i < N; ++i) eigs[i] = table[i]->eigenvalues_coeff_order();
  const TensorShape coeff_shape(state.extents(0));
  const double ts = now_seconds();
  detail::scale_by_symbol(state.arr[0], coeff_shape, eigs, axis_scale_factors(spec), spec.shift,
                          spec.orders);
  if (prof) std::fprintf(stderr, "  scale: %.4f s\n", now_seconds() - ts);

  for (int axis = N - 1; axis >= 0; --axis) {
    const double t0 = now_seconds();
    inverse_axis(state, axis, *table[axis]);
    if (prof) std::fprintf(stderr, "  inv axis %d: %.4f s\n", axis, now_seconds() - t0);
  }

  SolveReport report;
  report.solution = state_to_grid(std::move(state));
  report.solution.enforce_boundary();
  return report;
}

SolveReport run_partial_diagonalization(const ProblemSpec& spec, const GridFunctionND& load,
                                        TableSet& tables) {
  const int N = spec.dimension;
  require(N >= 2, "solve: partial diagonalization needs dimension >= 2");
  std::vector<const SpectralTable1D*> table(N);
  for (int i = 1; i < N; ++i) table[i] = &tables.get(spec.orders[i], spec.elements[i]);

  SweepState state = state_from_grid(load);
  for (int axis = 1; axis < N; ++axis) forward_axis(state, axis, *table[axis]);

  const std::vector<double> factors = axis_scale_factors(spec);
  std::vector<std::vector<double>> eigs(N);
  for (int i = 1; i < N; ++i) eigs[i] = table[i]->eigenvalues_coeff_order();

  const ElementMatrices em1 = build_element_matrices<double>(spec.orders[0]);
  const BandMatrix band_stiff = assemble_band_1d(em1.stiff_blocks, spec.orders[0], spec.elements[0]);
  const BandMatrix band_mass = assemble_band_1d(em1.mass_blocks, spec.orders[0], spec.elements[0]);

  const TensorShape sh_nodal(state.extents(0));
  const TensorShape sh_inter(state.extents(1));
  const std::int64_t freqs = nd::line_count(sh_nodal, 0);
  double* nodal_ptr = state.arr[0].data();
  double* inter_ptr = state.arr[1].data();
  const int dof = spec.orders[0] * spec.elements[0] - 1;

  // Frequency multi-index extents over axes 1..N-1 (row-major, last fastest),
  // matching the line enumeration order.
  std::vector<int> freq_ext(sh_nodal.extent.begin() + 1, sh_nodal.extent.end());

  std::vector<std::string> failure(max_threads());
#pragma omp parallel
  {
    BandMatrix local = BandMatrix::zeros(dof, spec.orders[0]);
    std::vector<double> rhs(dof);
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < freqs; ++r) {
      if (!failure[thread_id()].empty()) continue;
      double sigma = spec.shift;
      {
        std::int64_t rest = r;
        for (int i = N - 1; i >= 1; --i) {
          const int idx = static_cast<int>(rest % freq_ext[i - 1]);
          rest /= freq_ext[i - 1];
          sigma += factors[i] * eigs[i][idx];
        }
      }
      for (size_t t = 0; t < local.band.size(); ++t)
        local.band[t] = factors[0] * band_stiff.band[t] + sigma * band_mass.band[t];
      gather_dof_line(spec.orders[0], spec.elements[0],
                      nodal_ptr + nd::line_offset(sh_nodal, 0, r), sh_nodal.stride[0],
                      inter_ptr + nd::line_offset(sh_inter, 0, r), sh_inter.stride[0], rhs.data());
      try {
        band_cholesky(local);
      } catch (const Error&) {
        failure[thread_id()] =
            "solve: indefinite 1D system at transformed frequency " + std::to_string(r) +
            " (sigma " + std::to_string(sigma) + "); shift too negative";
        continue;
      }
      band_solve(local, rhs.data());
      scatter_dof_line(spec.orders[0], spec.elements[0], rhs.data(),
                       nodal_ptr + nd::line_offset(sh_nodal, 0, r), sh_nodal.stride[0],
                       inter_ptr + nd::line_offset(sh_inter, 0, r), sh_inter.stride[0]);
    }
  }
  for (const std::string& f : failure)
    if (!f.empty()) fail(f);

  for (int axis = N - 1; axis >= 1; --axis) inverse_axis(state, axis, *table[axis]);

  SolveReport report;
  report.solution = state_to_grid(std::move(state));
  report.solution.enforce_boundary();
  return report;
}

}  // namespace

GridFunctionND apply_operator(const ProblemSpec& spec, const GridFunctionND& v) {
  spec.validate();
  const int N = spec.dimension;
  std::vector<ElementMatrices> ems;
  ems.reserve(N);
  for (int i = 0; i < N; ++i) ems.push_back(build_element_matrices<double>(spec.orders[i]));
  const std::vector<double> factors = axis_scale_factors(spec);

  GridFunctionND result = GridFunctionND::zeros(v.axes);
  for (int t = 0; t < N; ++t) {
    GridFunctionND tmp = v;
    for (int u = 0; u < N; ++u)
      if (u != t) tmp = apply_axis_stencil(tmp, u, ems[u].mass_blocks);
    tmp = apply_axis_stencil(tmp, t, ems[t].stiff_blocks);
    result.axpy(factors[t], tmp);
  }
  GridFunctionND tmp = v;
  for (int u = 0; u < N; ++u) tmp = apply_axis_stencil(tmp, u, ems[u].mass_blocks);
  result.axpy(spec.shift, tmp);
  return result;
}

SolveReport solve_with_load(const ProblemSpec& spec, const GridFunctionND& load, TableSet& tables,
                            const SolveOptions& options) {
  spec.validate();
  apply_thread_limit(options.threads);

  // Table construction is not part of the timed solve.
  for (int i = 0; i < spec.dimension; ++i)
    if (options.algorithm == Algorithm::FullDiagonalization || i > 0)
      tables.get(spec.orders[i], spec.elements[i]);

  const double t0 = now_seconds();
  SolveReport report = options.algorithm == Algorithm::FullDiagonalization
                           ? run_full_diagonalization(spec, load, tables)
                           : run_partial_diagonalization(spec, load, tables);
  report.seconds_solve = now_seconds() - t0;

  if (options.compute_residual) {
    const GridFunctionND lhs = apply_operator(spec, report.solution);
    const double denom = load.max_abs();
    report.residual_rel = lhs.max_abs_diff(load) / (denom > 0 ? denom : 1.0);
  }
  if (spec.exact) report.error_uniform = max_error_vs(report.solution, spec.lengths, spec.exact);
  return report;
}

SolveReport solve(const ProblemSpec& spec, const SolveOptions& options) {
  spec.validate();
  TableSet local_tables(options.table_precision);
  TableSet& tables = options.tables ? *options.tables : local_tables;

  const double t0 = now_seconds();
  const GridFunctionND load = fem_load_average(spec);
  const double t1 = now_seconds();

  SolveReport report = solve_with_load(spec, load, tables, options);
  report.seconds_load = t1 - t0;
  return report;
}

}  // namespace sfem
