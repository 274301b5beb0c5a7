#include "listflow/warped.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "listflow/error.hpp"

namespace listflow {

namespace {

PeriodicGrid product_grid(const PeriodicGrid& base, std::size_t fiber_size, double fiber_period) {
  std::vector<std::size_t> sizes = base.sizes();
  std::vector<double> periods = base.periods();
  sizes.push_back(fiber_size);
  periods.push_back(fiber_period);
  return PeriodicGrid(sizes, periods);
}

// Base node underneath a product node (the fiber axis is the fastest one).
std::size_t base_node(const PeriodicGrid& product, std::size_t node) {
  return node / product.size(product.dim() - 1);
}

}  // namespace

WarpedMetric assemble_warped(const SymTensorField& h, const ScalarField& u, std::size_t fiber_size,
                             double fiber_period) {
  if (!(h.grid() == u.grid())) {
    throw FieldError("assemble_warped: h and u live on different grids");
  }
  u.require_finite("assemble_warped");
  validate_metric(h);
  const PeriodicGrid& base = h.grid();
  const int n = base.dim();
  if (n + 1 > kMaxDim) {
    throw FieldError("assemble_warped: base dimension too large");
  }
  PeriodicGrid product = product_grid(base, fiber_size, fiber_period);
  SymTensorField g(product);
  for (std::size_t node = 0; node < product.node_count(); ++node) {
    const std::size_t b = base_node(product, node);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        g(i, j)[node] = h(i, j)[b];
      }
    }
    g(n, n)[node] = std::exp(2.0 * u[b]);
  }
  return WarpedMetric{base, std::move(product), std::move(g), u};
}

std::pair<SymTensorField, ScalarField> extract_base(const WarpedMetric& wm) {
  const int n = wm.base.dim();
  SymTensorField h(wm.base);
  const std::size_t fiber = wm.fiber_size();
  for (std::size_t b = 0; b < wm.base.node_count(); ++b) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        h(i, j)[b] = wm.g(i, j)[b * fiber];
      }
    }
  }
  return {std::move(h), wm.warp};
}

WarpedRicci warped_ricci_closed_form(const GeometryCache& cache, const ScalarField& u) {
  const PeriodicGrid& grid = u.grid();
  const int n = grid.dim();
  WarpedRicci out{SymTensorField(grid), ScalarField(grid)};
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      auto dst = out.base_block(i, j).values();
      for (std::size_t node = 0; node < grid.node_count(); ++node) {
        dst[node] = cache.ricci(i, j)[node] - cache.hess_u(i, j)[node] - cache.du[i][node] * cache.du[j][node];
      }
    }
  }
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    out.fiber_block[node] = -std::exp(2.0 * u[node]) * (cache.lap_u[node] + cache.grad_u_norm_sq[node]);
  }
  return out;
}

CrossCheckResult cross_check(const WarpedMetric& wm, const GeometryCache& cache, const ScalarField& u,
                             StencilOrder order) {
  const int n = wm.base.dim();
  const PeriodicGrid& product = wm.product;
  const SymTensorField g_inv = inverse_metric(wm.g);
  const ChristoffelField gamma = christoffel(wm.g, g_inv, order);
  const RicciResult generic = ricci(wm.g, g_inv, gamma, order);
  const WarpedRicci closed = warped_ricci_closed_form(cache, u);

  CrossCheckResult out;
  out.spacing = wm.base.max_spacing();
  const std::size_t fiber = wm.fiber_size();
  for (std::size_t node = 0; node < product.node_count(); ++node) {
    const std::size_t b = base_node(product, node);
    const std::size_t first = b * fiber;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double v = generic.ricci(i, j)[node];
        out.base_block = std::max(out.base_block, std::abs(v - closed.base_block(i, j)[b]));
        out.fiber_variation = std::max(out.fiber_variation, std::abs(v - generic.ricci(i, j)[first]));
      }
      out.mixed_block = std::max(out.mixed_block, std::abs(generic.ricci(i, n)[node]));
    }
    const double vs = generic.ricci(n, n)[node];
    out.fiber_block = std::max(out.fiber_block, std::abs(vs - closed.fiber_block[b]));
    out.fiber_variation = std::max(out.fiber_variation, std::abs(vs - generic.ricci(n, n)[first]));
    const double expected_scalar = cache.scalar_curv[b] - 2.0 * cache.lap_u[b] - 2.0 * cache.grad_u_norm_sq[b];
    out.scalar = std::max(out.scalar, std::abs(generic.scalar[node] - expected_scalar));
  }
  return out;
}

}  // namespace listflow
