#include "listflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "listflow/error.hpp"

namespace listflow {

DegenerationError::DegenerationError(std::size_t node, double eigenvalue, std::optional<double> time)
    : Error(describe(node, eigenvalue, time)), node_(node), eigenvalue_(eigenvalue), time_(time) {}

std::string DegenerationError::describe(std::size_t node, double eigenvalue, std::optional<double> time) {
  std::ostringstream os;
  os.precision(17);
  os << "metric degenerated at node " << node << ": smallest eigenvalue " << eigenvalue;
  if (time) {
    os << " at t = " << *time;
  }
  return os.str();
}

PeriodicGrid::PeriodicGrid(std::span<const std::size_t> sizes, std::span<const double> periods) {
  if (sizes.size() != periods.size()) {
    throw FieldError("PeriodicGrid: sizes and periods differ in length");
  }
  if (sizes.size() < 2 || sizes.size() > kMaxDim) {
    throw FieldError("PeriodicGrid: dimension must be in [2, 4], got " + std::to_string(sizes.size()));
  }
  dim_ = static_cast<int>(sizes.size());
  for (int a = 0; a < dim_; ++a) {
    if (sizes[a] < kMinNodes) {
      throw FieldError("PeriodicGrid: axis " + std::to_string(a) + " has " + std::to_string(sizes[a]) +
                       " nodes, need at least 8");
    }
    if (!(periods[a] > 0.0) || !std::isfinite(periods[a])) {
      throw FieldError("PeriodicGrid: axis " + std::to_string(a) + " period must be finite and positive");
    }
    sizes_[a] = sizes[a];
    periods_[a] = periods[a];
    spacings_[a] = periods[a] / static_cast<double>(sizes[a]);
  }
  std::size_t stride = 1;
  for (int a = dim_ - 1; a >= 0; --a) {
    strides_[a] = stride;
    stride *= sizes_[a];
  }
  node_count_ = stride;
}

PeriodicGrid::PeriodicGrid(std::initializer_list<std::size_t> sizes, std::initializer_list<double> periods)
    : PeriodicGrid(std::span<const std::size_t>(sizes.begin(), sizes.size()),
                   std::span<const double>(periods.begin(), periods.size())) {}

PeriodicGrid PeriodicGrid::cube(int dim, std::size_t nodes, double period) {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(std::max(dim, 0)), nodes);
  std::vector<double> periods(sizes.size(), period);
  return PeriodicGrid(sizes, periods);
}

int PeriodicGrid::check_axis(int axis) const {
  if (axis < 0 || axis >= dim_) {
    throw FieldError("axis " + std::to_string(axis) + " out of range for dimension " + std::to_string(dim_));
  }
  return axis;
}

double PeriodicGrid::min_spacing() const noexcept {
  return *std::min_element(spacings_.begin(), spacings_.begin() + dim_);
}

double PeriodicGrid::max_spacing() const noexcept {
  return *std::max_element(spacings_.begin(), spacings_.begin() + dim_);
}

std::array<std::size_t, kMaxDim> PeriodicGrid::unflatten(std::size_t node) const {
  std::array<std::size_t, kMaxDim> idx{};
  for (int a = 0; a < dim_; ++a) {
    idx[a] = node / strides_[a];
    node -= idx[a] * strides_[a];
  }
  return idx;
}

std::size_t PeriodicGrid::flatten(std::span<const std::size_t> index) const {
  std::size_t node = 0;
  for (int a = 0; a < dim_; ++a) {
    node += (index[a] % sizes_[a]) * strides_[a];
  }
  return node;
}

bool PeriodicGrid::operator==(const PeriodicGrid& other) const noexcept {
  if (dim_ != other.dim_) {
    return false;
  }
  for (int a = 0; a < dim_; ++a) {
    if (sizes_[a] != other.sizes_[a] || periods_[a] != other.periods_[a]) {
      return false;
    }
  }
  return true;
}

ScalarField::ScalarField(const PeriodicGrid& grid, double fill)
    : grid_(grid), values_(grid.node_count(), fill) {}

ScalarField::ScalarField(const PeriodicGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.node_count()) {
    throw FieldError("ScalarField: expected " + std::to_string(grid_.node_count()) + " values, got " +
                     std::to_string(values_.size()));
  }
  require_finite("ScalarField");
}

bool ScalarField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void ScalarField::require_finite(const char* context) const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw FieldError(std::string(context) + ": non-finite value at node " + std::to_string(i));
    }
  }
}

VectorField::VectorField(const PeriodicGrid& grid)
    : comps_(static_cast<std::size_t>(grid.dim()), ScalarField(grid)) {}

SymTensorField::SymTensorField(const PeriodicGrid& grid)
    : dim_(grid.dim()), comps_(static_cast<std::size_t>(component_count(grid.dim())), ScalarField(grid)) {}

SymTensorField SymTensorField::identity(const PeriodicGrid& grid) {
  SymTensorField h(grid);
  for (int i = 0; i < grid.dim(); ++i) {
    h(i, i) = ScalarField(grid, 1.0);
  }
  return h;
}

bool SymTensorField::all_finite() const noexcept {
  return std::all_of(comps_.begin(), comps_.end(), [](const ScalarField& c) { return c.all_finite(); });
}

namespace detail {

namespace {

struct AxisView {
  std::size_t outer;
  std::size_t n;
  std::size_t inner;
};

AxisView axis_view(const PeriodicGrid& grid, int axis) {
  const std::size_t inner = grid.stride(axis);
  const std::size_t n = grid.size(axis);
  return {grid.node_count() / (n * inner), n, inner};
}

}  // namespace

void diff1(std::span<const double> in, std::span<double> out, const PeriodicGrid& grid, int axis,
           StencilOrder order) {
  const auto [outer, n, inner] = axis_view(grid, axis);
  const double h = grid.spacing(axis);
  for (std::size_t o = 0; o < outer; ++o) {
    const double* base = in.data() + o * n * inner;
    double* dst = out.data() + o * n * inner;
    for (std::size_t i = 0; i < n; ++i) {
      const double* p1 = base + ((i + 1) % n) * inner;
      const double* m1 = base + ((i + n - 1) % n) * inner;
      double* row = dst + i * inner;
      if (order == StencilOrder::kSecond) {
        const double c = 1.0 / (2.0 * h);
        for (std::size_t k = 0; k < inner; ++k) {
          row[k] = (p1[k] - m1[k]) * c;
        }
      } else {
        const double* p2 = base + ((i + 2) % n) * inner;
        const double* m2 = base + ((i + n - 2) % n) * inner;
        const double c = 1.0 / (12.0 * h);
        for (std::size_t k = 0; k < inner; ++k) {
          row[k] = (8.0 * (p1[k] - m1[k]) - (p2[k] - m2[k])) * c;
        }
      }
    }
  }
}

void diff2(std::span<const double> in, std::span<double> out, const PeriodicGrid& grid, int axis,
           StencilOrder order) {
  const auto [outer, n, inner] = axis_view(grid, axis);
  const double h = grid.spacing(axis);
  for (std::size_t o = 0; o < outer; ++o) {
    const double* base = in.data() + o * n * inner;
    double* dst = out.data() + o * n * inner;
    for (std::size_t i = 0; i < n; ++i) {
      const double* c0 = base + i * inner;
      const double* p1 = base + ((i + 1) % n) * inner;
      const double* m1 = base + ((i + n - 1) % n) * inner;
      double* row = dst + i * inner;
      if (order == StencilOrder::kSecond) {
        const double c = 1.0 / (h * h);
        for (std::size_t k = 0; k < inner; ++k) {
          row[k] = ((p1[k] + m1[k]) - 2.0 * c0[k]) * c;
        }
      } else {
        const double* p2 = base + ((i + 2) % n) * inner;
        const double* m2 = base + ((i + n - 2) % n) * inner;
        const double c = 1.0 / (12.0 * h * h);
        for (std::size_t k = 0; k < inner; ++k) {
          row[k] = (16.0 * (p1[k] + m1[k]) - (p2[k] + m2[k]) - 30.0 * c0[k]) * c;
        }
      }
    }
  }
}

ScalarField d1(const ScalarField& f, int axis, StencilOrder order) {
  ScalarField out(f.grid());
  diff1(f.values(), out.values(), f.grid(), axis, order);
  return out;
}

ScalarField d2(const ScalarField& f, int axis_a, int axis_b, StencilOrder order) {
  if (axis_a == axis_b) {
    ScalarField out(f.grid());
    diff2(f.values(), out.values(), f.grid(), axis_a, order);
    return out;
  }
  const int lo = std::min(axis_a, axis_b);
  const int hi = std::max(axis_a, axis_b);
  return d1(d1(f, lo, order), hi, order);
}

}  // namespace detail

namespace {

void check_order(StencilOrder order) {
  if (order != StencilOrder::kSecond && order != StencilOrder::kFourth) {
    throw FieldError("stencil order must be 2 or 4");
  }
}

}  // namespace

ScalarField partial_derivative(const ScalarField& f, int axis, StencilOrder order) {
  check_order(order);
  (void)f.grid().size(axis);
  f.require_finite("partial_derivative");
  return detail::d1(f, axis, order);
}

ScalarField second_partial(const ScalarField& f, int axis_a, int axis_b, StencilOrder order) {
  check_order(order);
  (void)f.grid().size(axis_a);
  (void)f.grid().size(axis_b);
  f.require_finite("second_partial");
  return detail::d2(f, axis_a, axis_b, order);
}

double sup_norm(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

double osc(const ScalarField& f) {
  const auto [lo, hi] = std::minmax_element(f.values().begin(), f.values().end());
  return *hi - *lo;
}

double max_value(const ScalarField& f) {
  return *std::max_element(f.values().begin(), f.values().end());
}

}  // namespace listflow
