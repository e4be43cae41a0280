#include "sfem/ndgrid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace sfem {

GridFunctionND GridFunctionND::zeros(std::vector<AxisSpec> axes_in) {
  GridFunctionND g;
  g.axes = std::move(axes_in);
  const unsigned n_classes = 1u << g.axes.size();
  g.classes.resize(n_classes);
  for (unsigned mask = 0; mask < n_classes; ++mask) {
    const TensorShape shape(g.class_extents(mask));
    g.classes[mask].assign(shape.total, 0.0);
  }
  return g;
}

std::vector<int> GridFunctionND::class_extents(unsigned mask) const {
  std::vector<int> ext(axes.size());
  for (size_t i = 0; i < axes.size(); ++i)
    ext[i] = (mask >> i & 1u) ? axes[i].interior_extent() : axes[i].nodal_extent();
  return ext;
}

std::int64_t GridFunctionND::value_count() const {
  std::int64_t total = 0;
  for (const auto& c : classes) total += static_cast<std::int64_t>(c.size());
  return total;
}

void GridFunctionND::enforce_boundary() {
  for (unsigned mask = 0; mask < classes.size(); ++mask) {
    const TensorShape shape(class_extents(mask));
    for (int axis = 0; axis < dim(); ++axis) {
      if (mask >> axis & 1u) continue;
      nd::for_each_line(shape, axis, [&](std::int64_t base, std::int64_t stride) {
        classes[mask][base] = 0.0;
        classes[mask][base + stride * (shape.extent[axis] - 1)] = 0.0;
      });
    }
  }
}

GridFunctionND& GridFunctionND::axpy(double alpha, const GridFunctionND& other) {
  require(axes.size() == other.axes.size(), "axpy: dimension mismatch");
  for (size_t m = 0; m < classes.size(); ++m) {
    require(classes[m].size() == other.classes[m].size(), "axpy: shape mismatch");
    for (size_t i = 0; i < classes[m].size(); ++i) classes[m][i] += alpha * other.classes[m][i];
  }
  return *this;
}

double GridFunctionND::max_abs() const {
  double worst = 0;
  for (const auto& c : classes)
    for (double v : c) worst = std::max(worst, std::abs(v));
  return worst;
}

double GridFunctionND::max_abs_diff(const GridFunctionND& other) const {
  double worst = 0;
  for (size_t m = 0; m < classes.size(); ++m)
    for (size_t i = 0; i < classes[m].size(); ++i)
      worst = std::max(worst, std::abs(classes[m][i] - other.classes[m][i]));
  return worst;
}

double axis_coordinate(const AxisSpec& axis, double length, bool interior, int index) {
  const double h = length / axis.elements;
  if (!interior) return h * index;
  const int m = axis.order - 1;
  const int element = index / m;          // 0-based
  const int comp = index % m + 1;         // 1..n-1
  return h * (element + static_cast<double>(comp) / axis.order);
}

double max_error_vs(const GridFunctionND& g, std::span<const double> lengths,
                    const std::function<double(std::span<const double>)>& exact) {
  const int N = g.dim();
  std::vector<double> x(N);
  std::vector<int> idx(N);
  double worst = 0;
  for (unsigned mask = 0; mask < g.classes.size(); ++mask) {
    const TensorShape shape(g.class_extents(mask));
    if (shape.total == 0) continue;
    std::fill(idx.begin(), idx.end(), 0);
    for (std::int64_t flat = 0; flat < shape.total; ++flat) {
      for (int i = 0; i < N; ++i)
        x[i] = axis_coordinate(g.axes[i], lengths[i], mask >> i & 1u, idx[i]);
      worst = std::max(worst, std::abs(g.classes[mask][flat] - exact(x)));
      for (int i = N - 1; i >= 0; --i) {
        if (++idx[i] < shape.extent[i]) break;
        idx[i] = 0;
      }
    }
  }
  return worst;
}

void write_grid_csv(const GridFunctionND& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("write_grid_csv: cannot open '" + path + "'");
  const int N = g.dim();
  out << "class";
  for (int i = 1; i <= N; ++i) out << ",index" << i << ",component" << i;
  out << ",value\n";

  std::vector<int> idx(N);
  char buf[40];
  for (unsigned mask = 0; mask < g.classes.size(); ++mask) {
    std::string cls(N, 'n');
    for (int i = 0; i < N; ++i)
      if (mask >> i & 1u) cls[i] = 'm';
    const TensorShape shape(g.class_extents(mask));
    std::fill(idx.begin(), idx.end(), 0);
    for (std::int64_t flat = 0; flat < shape.total; ++flat) {
      out << cls;
      for (int i = 0; i < N; ++i) {
        if (mask >> i & 1u) {
          const int m = g.axes[i].order - 1;
          out << ',' << (idx[i] / m + 1) << ',' << (idx[i] % m + 1);  // element 1..K, comp 1..n-1
        } else {
          out << ',' << idx[i] << ",0";
        }
      }
      std::snprintf(buf, sizeof buf, "%.17g", g.classes[mask][flat]);
      out << ',' << buf << '\n';
      for (int i = N - 1; i >= 0; --i) {
        if (++idx[i] < shape.extent[i]) break;
        idx[i] = 0;
      }
    }
  }
  if (!out) fail("write_grid_csv: write failed for '" + path + "'");
}

namespace nd {

std::int64_t line_count(const TensorShape& shape, int axis) {
  return shape.extent[axis] == 0 ? 0 : shape.total / shape.extent[axis];
}

std::int64_t line_offset(const TensorShape& shape, int axis, std::int64_t r) {
  std::int64_t offset = 0;
  for (int i = static_cast<int>(shape.extent.size()) - 1; i >= 0; --i) {
    if (i == axis) continue;
    const std::int64_t e = shape.extent[i];
    offset += (r % e) * shape.stride[i];
    r /= e;
  }
  return offset;
}

void for_each_line(const TensorShape& shape, int axis,
                   const std::function<void(std::int64_t, std::int64_t)>& cb) {
  const std::int64_t lines = line_count(shape, axis);
  for (std::int64_t r = 0; r < lines; ++r) cb(line_offset(shape, axis, r), shape.stride[axis]);
}

}  // namespace nd

}  // namespace sfem
