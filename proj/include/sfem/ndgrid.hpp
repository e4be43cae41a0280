#pragma once

// N-dimensional tensor-product grid functions. Values are stored per
// index-parity class: one dense array for every choice of nodal vs
// element-interior indexing along each axis (2^N arrays). Nodal axes keep
// their boundary slots, pinned to zero.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sfem/types.hpp"

namespace sfem {

struct AxisSpec {
  int elements = 0;  // K
  int order = 0;     // n

  int nodal_extent() const { return elements + 1; }
  int interior_extent() const { return elements * (order - 1); }
  int dof_extent() const { return elements * order - 1; }  // without boundary
};

/// Row-major extents/strides helper, last axis fastest.
struct TensorShape {
  std::vector<int> extent;
  std::vector<std::int64_t> stride;
  std::int64_t total = 0;

  explicit TensorShape(std::vector<int> ext) : extent(std::move(ext)) {
    stride.assign(extent.size(), 0);
    total = extent.empty() ? 0 : 1;
    for (int i = static_cast<int>(extent.size()) - 1; i >= 0; --i) {
      stride[i] = total;
      total *= extent[i];
    }
  }
};

struct GridFunctionND {
  std::vector<AxisSpec> axes;
  std::vector<std::vector<double>> classes;  // 2^N arrays; mask bit i set = interior on axis i

  int dim() const { return static_cast<int>(axes.size()); }
  static GridFunctionND zeros(std::vector<AxisSpec> axes);
  std::vector<int> class_extents(unsigned mask) const;
  std::int64_t value_count() const;

  void enforce_boundary();

  GridFunctionND& axpy(double alpha, const GridFunctionND& other);  // this += alpha*other
  double max_abs() const;
  double max_abs_diff(const GridFunctionND& other) const;
};

/// Physical coordinate of a stored value along one axis.
/// For nodal axes `index` is the node number; for interior axes it is the
/// flattened element-major interior index.
double axis_coordinate(const AxisSpec& axis, double length, bool interior, int index);

/// Mesh-uniform distance between a grid function and a callable of the
/// coordinates, taken over every stored value.
double max_error_vs(const GridFunctionND& g, std::span<const double> lengths,
                    const std::function<double(std::span<const double>)>& exact);

/// Columnar dump: one row per stored value with the parity class, per-axis
/// element/node index, per-axis interior component, and the value.
void write_grid_csv(const GridFunctionND& g, const std::string& path);

namespace nd {

// Visit every line along `axis` of a tensor: cb(base_offset, stride).
void for_each_line(const TensorShape& shape, int axis,
                   const std::function<void(std::int64_t, std::int64_t)>& cb);

// Number of lines along `axis`.
std::int64_t line_count(const TensorShape& shape, int axis);

// Offset of line `r` (lines enumerated in row-major order of the reduced
// index) along `axis`.
std::int64_t line_offset(const TensorShape& shape, int axis, std::int64_t r);

}  // namespace nd

}  // namespace sfem
