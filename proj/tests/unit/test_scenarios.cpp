#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "listflow/error.hpp"
#include "listflow/geometry.hpp"
#include "listflow/scenarios.hpp"

namespace {

using namespace listflow;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

TEST(Scenarios, NamesAndDims) {
  EXPECT_EQ(scenario_names().size(), 5u);
  EXPECT_EQ(scenario_dim("product3d"), 3);
  EXPECT_EQ(scenario_dim("coupled"), 2);
  EXPECT_THROW(scenario_dim("bogus"), ConfigError);
}

TEST(Scenarios, DimensionMismatchIsRejected) {
  EXPECT_THROW(instantiate("coupled", PeriodicGrid::cube(3, 8, 1.0)), ConfigError);
  EXPECT_THROW(instantiate("product3d", PeriodicGrid::cube(2, 8, 1.0)), ConfigError);
}

TEST(Scenarios, FixedPointHasZeroCurvature) {
  const PeriodicGrid g = PeriodicGrid::cube(2, 16, kTwoPi);
  const FlowState s = instantiate("fixed_point", g, 0.5);
  EXPECT_EQ(s.t, 0.5);
  const GeometryCache c = build_cache(s.h, s.u, StencilOrder::kSecond);
  EXPECT_EQ(sup_norm(c.scalar_curv), 0.0);
  EXPECT_EQ(sup_norm(s.u), 0.0);
}

TEST(Scenarios, ZeroAmplitudeBumpIsFixedPoint) {
  const PeriodicGrid g = PeriodicGrid::cube(2, 16, kTwoPi);
  ScenarioParams p;
  p.amplitude = 0.0;
  const FlowState a = instantiate("flat_bump_u", g, 0.0, p);
  const FlowState b = instantiate("fixed_point", g);
  EXPECT_EQ(a.h, b.h);
  EXPECT_EQ(a.u, b.u);
}

TEST(Scenarios, BumpShape) {
  const PeriodicGrid g = PeriodicGrid::cube(2, 16, kTwoPi);
  const FlowState s = instantiate("flat_bump_u", g);
  EXPECT_DOUBLE_EQ(sup_norm(s.u), 0.5);  // 16 nodes hit the extrema
  EXPECT_DOUBLE_EQ(osc(s.u), 1.0);
}

TEST(Scenarios, ConformalCurvatureOracle) {
  const PeriodicGrid g = PeriodicGrid::cube(2, 64, kTwoPi);
  const FlowState s = instantiate("conformal_bump", g);
  const GeometryCache c = build_cache(s.h, s.u, StencilOrder::kSecond);
  for (std::size_t node = 0; node < g.node_count(); node += 5) {
    const double x = g.coordinate(0, g.unflatten(node)[0]);
    const double exact = 2.0 * std::exp(-0.6 * std::cos(x)) * 0.3 * std::cos(x);
    EXPECT_NEAR(c.scalar_curv[node], exact, 3e-3);
  }
}

TEST(Scenarios, CoarseDataIsRestrictionOfFine) {
  for (const auto& name : scenario_names()) {
    const int dim = scenario_dim(name);
    const PeriodicGrid coarse = PeriodicGrid::cube(dim, 8, kTwoPi);
    const PeriodicGrid fine = PeriodicGrid::cube(dim, 16, kTwoPi);
    const FlowState c = instantiate(name, coarse);
    const FlowState f = instantiate(name, fine);
    for (std::size_t node = 0; node < coarse.node_count(); ++node) {
      auto idx = coarse.unflatten(node);
      for (int a = 0; a < dim; ++a) {
        idx[static_cast<std::size_t>(a)] *= 2;
      }
      const std::size_t fn = fine.flatten(std::span<const std::size_t>(idx.data(), static_cast<std::size_t>(dim)));
      EXPECT_EQ(c.u[node], f.u[fn]) << name;
      EXPECT_EQ(c.h(0, 0)[node], f.h(0, 0)[fn]) << name;
    }
  }
}

TEST(Scenarios, Deterministic) {
  const PeriodicGrid g = PeriodicGrid::cube(3, 8, kTwoPi);
  EXPECT_EQ(instantiate("product3d", g), instantiate("product3d", g));
}

TEST(Scenarios, SpdMarginViolation) {
  ScenarioParams p;
  p.phi_amplitude = -4.0;  // e^{2 phi} dips to e^{-8} < 1e-3
  EXPECT_THROW(instantiate("conformal_bump", PeriodicGrid::cube(2, 16, kTwoPi), 0.0, p), ConfigError);
}

TEST(Scenarios, ProductKeepsThirdAxisFlat) {
  const PeriodicGrid g = PeriodicGrid::cube(3, 8, kTwoPi);
  const FlowState s = instantiate("product3d", g);
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    EXPECT_EQ(s.h(2, 2)[node], 1.0);
    EXPECT_EQ(s.h(0, 2)[node], 0.0);
    EXPECT_EQ(s.h(0, 0)[node], s.h(1, 1)[node]);
  }
}

}  // namespace
