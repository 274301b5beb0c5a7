#include "listflow/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "listflow/error.hpp"
#include "listflow/geometry.hpp"

namespace listflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double phase(const PeriodicGrid& grid, int axis, std::size_t index) {
  return kTwoPi * grid.coordinate(axis, index) / grid.period(axis);
}

bool is_conformal(std::string_view name) {
  return name == "conformal_bump" || name == "coupled" || name == "product3d";
}

bool has_bump(std::string_view name) { return name == "flat_bump_u" || name == "coupled" || name == "product3d"; }

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"fixed_point", "flat_bump_u", "conformal_bump", "coupled", "product3d"};
  return names;
}

int scenario_dim(std::string_view name) {
  for (const auto& n : scenario_names()) {
    if (n == name) {
      return name == "product3d" ? 3 : 2;
    }
  }
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

ScalarField conformal_factor(std::string_view name, const PeriodicGrid& grid, const ScenarioParams& params) {
  if (!is_conformal(name)) {
    return ScalarField(grid);
  }
  return ScalarField::from_function(
      grid, [&](const auto& idx) { return params.phi_amplitude * std::cos(phase(grid, 0, idx[0])); });
}

FlowState instantiate(std::string_view name, const PeriodicGrid& grid, double t0, const ScenarioParams& params) {
  const int dim = scenario_dim(name);
  if (grid.dim() != dim) {
    throw ConfigError("scenario '" + std::string(name) + "' needs a " + std::to_string(dim) + "-dimensional grid");
  }

  SymTensorField h = SymTensorField::identity(grid);
  if (is_conformal(name)) {
    const ScalarField phi = conformal_factor(name, grid, params);
    ScalarField factor(grid);
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
      factor[node] = std::exp(2.0 * phi[node]);
    }
    // product3d keeps the third axis flat.
    h(0, 0) = factor;
    h(1, 1) = factor;
  }

  ScalarField u = ScalarField::from_function(grid, [&](const auto& idx) {
    double v = params.u_offset;
    if (has_bump(name)) {
      double bump = params.amplitude * std::sin(phase(grid, 0, idx[0])) * std::sin(phase(grid, 1, idx[1]));
      if (dim == 3) {
        bump *= std::cos(phase(grid, 2, idx[2]));
      }
      v += bump;
    }
    return v;
  });

  try {
    validate_metric(h, kScenarioSpdMargin);
  } catch (const DegenerationError& e) {
    throw ConfigError("scenario '" + std::string(name) + "' violates the SPD margin: " + e.what());
  }
  return FlowState{t0, std::move(h), std::move(u)};
}

}  // namespace listflow
