#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace listflow {

inline constexpr int kMaxDim = 4;

enum class StencilOrder : int { kSecond = 2, kFourth = 4 };

constexpr int as_int(StencilOrder order) { return static_cast<int>(order); }

/// Uniform node-centred grid on an n-torus. Node i along an axis sits at
/// x = i * L / N. Dimension 4 is only used for warped product grids.
class PeriodicGrid {
 public:
  static constexpr std::size_t kMinNodes = 8;

  PeriodicGrid(std::span<const std::size_t> sizes, std::span<const double> periods);
  PeriodicGrid(std::initializer_list<std::size_t> sizes, std::initializer_list<double> periods);

  /// Same node count per axis and a common period.
  static PeriodicGrid cube(int dim, std::size_t nodes, double period);

  int dim() const noexcept { return dim_; }
  std::size_t size(int axis) const { return sizes_[check_axis(axis)]; }
  double period(int axis) const { return periods_[check_axis(axis)]; }
  double spacing(int axis) const { return spacings_[check_axis(axis)]; }
  /// Product of the sizes of all axes after `axis` (row-major, last axis fastest).
  std::size_t stride(int axis) const { return strides_[check_axis(axis)]; }
  std::size_t node_count() const noexcept { return node_count_; }
  double min_spacing() const noexcept;
  double max_spacing() const noexcept;

  double coordinate(int axis, std::size_t index) const {
    return (static_cast<double>(index) * period(axis)) / static_cast<double>(size(axis));
  }

  std::array<std::size_t, kMaxDim> unflatten(std::size_t node) const;
  std::size_t flatten(std::span<const std::size_t> index) const;

  std::vector<std::size_t> sizes() const { return {sizes_.begin(), sizes_.begin() + dim_}; }
  std::vector<double> periods() const { return {periods_.begin(), periods_.begin() + dim_}; }

  bool operator==(const PeriodicGrid& other) const noexcept;

 private:
  int check_axis(int axis) const;

  int dim_ = 0;
  std::array<std::size_t, kMaxDim> sizes_{};
  std::array<double, kMaxDim> periods_{};
  std::array<double, kMaxDim> spacings_{};
  std::array<std::size_t, kMaxDim> strides_{};
  std::size_t node_count_ = 0;
};

/// One double per grid node.
class ScalarField {
 public:
  explicit ScalarField(const PeriodicGrid& grid, double fill = 0.0);
  /// Takes ownership of `values`; throws FieldError on size mismatch or non-finite data.
  ScalarField(const PeriodicGrid& grid, std::vector<double> values);

  template <class F>
  static ScalarField from_function(const PeriodicGrid& grid, F&& f) {
    ScalarField out(grid);
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
      out.values_[node] = f(grid.unflatten(node));
    }
    out.require_finite("from_function");
    return out;
  }

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t node) const { return values_[node]; }
  double& operator[](std::size_t node) { return values_[node]; }

  bool all_finite() const noexcept;
  void require_finite(const char* context) const;

  bool operator==(const ScalarField& other) const = default;

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

/// Coordinate components of a vector (or covector, by convention of the caller).
class VectorField {
 public:
  explicit VectorField(const PeriodicGrid& grid);

  const PeriodicGrid& grid() const noexcept { return comps_.front().grid(); }
  int dim() const noexcept { return static_cast<int>(comps_.size()); }
  const ScalarField& operator[](int k) const { return comps_[static_cast<std::size_t>(k)]; }
  ScalarField& operator[](int k) { return comps_[static_cast<std::size_t>(k)]; }

  bool operator==(const VectorField& other) const = default;

 private:
  std::vector<ScalarField> comps_;
};

/// Symmetric rank-2 field stored as the upper triangle, n(n+1)/2 components.
class SymTensorField {
 public:
  explicit SymTensorField(const PeriodicGrid& grid);

  /// Constant-coefficient identity, i.e. the flat metric in grid coordinates.
  static SymTensorField identity(const PeriodicGrid& grid);

  static constexpr int component_count(int dim) { return dim * (dim + 1) / 2; }
  static constexpr int index(int dim, int i, int j) {
    if (i > j) {
      const int t = i;
      i = j;
      j = t;
    }
    return i * dim - i * (i - 1) / 2 + (j - i);
  }

  const PeriodicGrid& grid() const noexcept { return comps_.front().grid(); }
  int dim() const noexcept { return dim_; }
  int components() const noexcept { return static_cast<int>(comps_.size()); }

  const ScalarField& operator()(int i, int j) const { return comps_[static_cast<std::size_t>(index(dim_, i, j))]; }
  ScalarField& operator()(int i, int j) { return comps_[static_cast<std::size_t>(index(dim_, i, j))]; }
  const ScalarField& component(int c) const { return comps_[static_cast<std::size_t>(c)]; }
  ScalarField& component(int c) { return comps_[static_cast<std::size_t>(c)]; }

  bool all_finite() const noexcept;

  bool operator==(const SymTensorField& other) const = default;

 private:
  int dim_;
  std::vector<ScalarField> comps_;
};

/// Central difference along one axis with periodic wraparound.
ScalarField partial_derivative(const ScalarField& f, int axis, StencilOrder order = StencilOrder::kSecond);

/// Second derivative. Equal axes use the compact second-difference stencil; mixed
/// axes compose first derivatives in a canonical axis order so the result is
/// independent of argument order.
ScalarField second_partial(const ScalarField& f, int axis_a, int axis_b,
                           StencilOrder order = StencilOrder::kSecond);

double sup_norm(const ScalarField& f);
double osc(const ScalarField& f);
double max_value(const ScalarField& f);

namespace detail {

// Unchecked kernels; callers validate finiteness once up front.
void diff1(std::span<const double> in, std::span<double> out, const PeriodicGrid& grid, int axis,
           StencilOrder order);
void diff2(std::span<const double> in, std::span<double> out, const PeriodicGrid& grid, int axis,
           StencilOrder order);

ScalarField d1(const ScalarField& f, int axis, StencilOrder order);
ScalarField d2(const ScalarField& f, int axis_a, int axis_b, StencilOrder order);

}  // namespace detail

}  // namespace listflow
