#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "listflow/flow_state.hpp"
#include "listflow/grid.hpp"

namespace listflow {

/// Tunable amplitudes of the closed-form presets.
struct ScenarioParams {
  double amplitude = 0.5;      // A in u = A sin sin (...)
  double phi_amplitude = 0.3;  // conformal factor h = exp(2 φ) δ, φ = a cos(2πx/L)
  double u_offset = 0.0;       // constant added to u
  bool operator==(const ScenarioParams&) const = default;
};

/// Minimum smallest-eigenvalue margin every preset metric must satisfy.
inline constexpr double kScenarioSpdMargin = 1e-3;

/// fixed_point, flat_bump_u, conformal_bump, coupled (dimension 2) and product3d (dimension 3).
const std::vector<std::string>& scenario_names();
int scenario_dim(std::string_view name);

/// Closed-form initial data at time t0. Throws ConfigError for an unknown name or
/// a grid of the wrong dimension.
FlowState instantiate(std::string_view name, const PeriodicGrid& grid, double t0 = 0.0,
                      const ScenarioParams& params = {});

/// φ sampled on the grid for the conformal presets (zero for the flat ones).
ScalarField conformal_factor(std::string_view name, const PeriodicGrid& grid, const ScenarioParams& params = {});

}  // namespace listflow
