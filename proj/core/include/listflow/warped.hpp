#pragma once

#include <utility>

#include "listflow/geometry.hpp"
#include "listflow/grid.hpp"

namespace listflow {

/// g = h + e^{2u} ds² on N × S¹, sampled on the product grid whose last axis is the fiber.
struct WarpedMetric {
  PeriodicGrid base;
  PeriodicGrid product;
  SymTensorField g;
  ScalarField warp;  // u on the base, kept so extraction is exact

  std::size_t fiber_size() const { return product.size(product.dim() - 1); }
  double fiber_period() const { return product.period(product.dim() - 1); }
};

inline constexpr std::size_t kDefaultFiberSize = 8;

WarpedMetric assemble_warped(const SymTensorField& h, const ScalarField& u, std::size_t fiber_size = kDefaultFiberSize,
                             double fiber_period = 1.0);

/// (h, u) read back from the blocks of `wm`.
std::pair<SymTensorField, ScalarField> extract_base(const WarpedMetric& wm);

/// Closed-form Ricci of the warped metric, both blocks living on the base grid:
///   Ric(g)_ij = R_ij − (D²u)_ij − ∂_i u ∂_j u,   Ric(g)_ss = −e^{2u} (Δ_h u + |∇u|²).
struct WarpedRicci {
  SymTensorField base_block;
  ScalarField fiber_block;
};

WarpedRicci warped_ricci_closed_form(const GeometryCache& cache, const ScalarField& u);

/// Max absolute discrepancies between the generic (n+1)-dimensional Ricci of wm.g
/// and the closed form.
struct CrossCheckResult {
  double base_block = 0.0;
  double fiber_block = 0.0;
  double mixed_block = 0.0;      // generic Ric(g)_is, closed form is zero
  double fiber_variation = 0.0;  // spread of the generic result along s
  double scalar = 0.0;           // tr_g Ric(g) vs R − 2Δ_h u − 2|∇u|²
  double spacing = 0.0;          // max base spacing
};

CrossCheckResult cross_check(const WarpedMetric& wm, const GeometryCache& cache, const ScalarField& u,
                             StencilOrder order);

}  // namespace listflow
