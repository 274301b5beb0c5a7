#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "listflow/scenarios.hpp"
#include "listflow/warped.hpp"

namespace {

using namespace listflow;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

PeriodicGrid square(std::size_t n) { return PeriodicGrid::cube(2, n, kTwoPi); }

CrossCheckResult check(const char* scenario, std::size_t n, const ScenarioParams& p = {}) {
  const FlowState s = instantiate(scenario, square(n), 0.0, p);
  const GeometryCache c = build_cache(s.h, s.u, StencilOrder::kSecond);
  return cross_check(assemble_warped(s.h, s.u), c, s.u, StencilOrder::kSecond);
}

TEST(Warped, BlockStructure) {
  const FlowState s = instantiate("coupled", square(16));
  const WarpedMetric wm = assemble_warped(s.h, s.u, 8, 1.0);
  EXPECT_EQ(wm.product.dim(), 3);
  EXPECT_EQ(wm.fiber_size(), 8u);
  EXPECT_EQ(wm.fiber_period(), 1.0);
  for (std::size_t node = 0; node < wm.product.node_count(); ++node) {
    const std::size_t b = node / 8;
    EXPECT_EQ(wm.g(0, 0)[node], s.h(0, 0)[b]);
    EXPECT_EQ(wm.g(0, 2)[node], 0.0);
    EXPECT_EQ(wm.g(1, 2)[node], 0.0);
    EXPECT_EQ(wm.g(2, 2)[node], std::exp(2.0 * s.u[b]));
  }
}

TEST(Warped, ConstantWarpIsConstantFiber) {
  const PeriodicGrid g = square(16);
  const WarpedMetric wm = assemble_warped(SymTensorField::identity(g), ScalarField(g, 0.5));
  for (double v : wm.g(2, 2).values()) {
    EXPECT_EQ(v, std::exp(1.0));
  }
}

TEST(Warped, ExtractionIsExactInverse) {
  const FlowState s = instantiate("coupled", square(16));
  const auto [h, u] = extract_base(assemble_warped(s.h, s.u));
  EXPECT_EQ(h, s.h);
  EXPECT_EQ(u, s.u);
}

TEST(Warped, ClosedFormOnFlatSine) {
  const PeriodicGrid g = square(64);
  const ScalarField u = ScalarField::from_function(g, [&](const auto& idx) { return std::sin(g.coordinate(0, idx[0])); });
  const SymTensorField h = SymTensorField::identity(g);
  const GeometryCache c = build_cache(h, u, StencilOrder::kFourth);
  const WarpedRicci w = warped_ricci_closed_form(c, u);
  for (std::size_t node = 0; node < g.node_count(); node += 17) {
    const double x = g.coordinate(0, g.unflatten(node)[0]);
    const double expected = -std::exp(2.0 * u[node]) * (-std::sin(x) + std::cos(x) * std::cos(x));
    EXPECT_NEAR(w.fiber_block[node], expected, 1e-4);
    // base block: -D^2u - du du, only the xx entry survives
    EXPECT_NEAR(w.base_block(0, 0)[node], std::sin(x) - std::cos(x) * std::cos(x), 1e-4);
    EXPECT_EQ(w.base_block(1, 1)[node], 0.0);
  }
}

TEST(Warped, FlatConstantHasZeroBlocks) {
  const PeriodicGrid g = square(16);
  const ScalarField u(g, 0.3);
  const GeometryCache c = build_cache(SymTensorField::identity(g), u, StencilOrder::kSecond);
  const WarpedRicci w = warped_ricci_closed_form(c, u);
  EXPECT_EQ(sup_norm(w.fiber_block), 0.0);
  EXPECT_EQ(sup_norm(w.base_block(0, 1)), 0.0);
}

TEST(Warped, DirectProductCrossCheck) {
  ScenarioParams p;
  const CrossCheckResult r = check("conformal_bump", 32, p);
  EXPECT_LE(r.base_block, 1e-10);
  EXPECT_LE(r.fiber_block, 1e-10);
  EXPECT_LE(r.mixed_block, 1e-10);
  EXPECT_LE(r.fiber_variation, 1e-12);
}

TEST(Warped, FlatBumpConvergesAtSecondOrder) {
  const CrossCheckResult a = check("flat_bump_u", 32);
  const CrossCheckResult b = check("flat_bump_u", 64);
  EXPECT_GE(a.base_block / b.base_block, 3.6);
  EXPECT_GE(a.fiber_block / b.fiber_block, 3.6);
  EXPECT_LE(b.mixed_block, 1e-12);
}

TEST(Warped, CoupledConvergesAndIsFiberConstant) {
  const CrossCheckResult a = check("coupled", 32);
  const CrossCheckResult b = check("coupled", 64);
  EXPECT_GE(a.base_block / b.base_block, 3.6);
  EXPECT_GE(a.fiber_block / b.fiber_block, 3.6);
  EXPECT_GE(a.scalar / b.scalar, 3.6);
  EXPECT_LE(b.fiber_variation, 1e-12);
}

TEST(Warped, ThreeDimensionalBase) {
  const PeriodicGrid g = PeriodicGrid::cube(3, 12, kTwoPi);
  const FlowState s = instantiate("product3d", g);
  const GeometryCache c = build_cache(s.h, s.u, StencilOrder::kSecond);
  const CrossCheckResult r = cross_check(assemble_warped(s.h, s.u), c, s.u, StencilOrder::kSecond);
  EXPECT_LE(r.fiber_variation, 1e-12);
  EXPECT_LE(r.mixed_block, std::max(r.base_block, r.fiber_block));
  EXPECT_LT(r.base_block, 0.5);
}

}  // namespace
