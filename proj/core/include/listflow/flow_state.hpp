#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "listflow/geometry.hpp"
#include "listflow/grid.hpp"

namespace listflow {

/// (t, h, u): the full state of the coupled metric/warping-function system.
struct FlowState {
  double t = 0.0;
  SymTensorField h;
  ScalarField u;

  const PeriodicGrid& grid() const noexcept { return u.grid(); }
  bool operator==(const FlowState& other) const = default;
};

enum class Integrator { kEuler, kRk2, kRk4 };

std::string_view to_string(Integrator integrator);
Integrator parse_integrator(std::string_view name);

/// Monitor weight μ in F = |D²u|² + μ|∇u|². Automatic mode tracks
/// 2 · c_est · max_so_far(sup|Rm| + sup|∇u|²).
struct MuSetting {
  bool automatic = true;
  double value = 0.0;

  static MuSetting fixed(double mu) { return {false, mu}; }
  bool operator==(const MuSetting&) const = default;
};

struct FlowConfig {
  double t0 = 0.0;
  double t_end = 1.0;
  double cfl = 0.2;
  Integrator integrator = Integrator::kRk4;
  StencilOrder order = StencilOrder::kSecond;
  bool deturck = true;
  MuSetting mu;
  double lambda_min = kDefaultLambdaMin;
  std::size_t output_every = 10;
  /// 0 means unlimited.
  std::size_t max_steps = 0;

  // Harness switches: a frozen metric gives pure heat flow of u; dropping the
  // coupling gives pure Ricci flow of h.
  bool evolve_metric = true;
  bool u_coupling = true;

  // Check constants.
  double c_est = 10.0;
  double tol_decay = 0.05;
  double tol_mono = 1e-3;
  double tol_F = 1e-3;
  double hess_slack = 10.0;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
  bool operator==(const FlowConfig&) const = default;
};

}  // namespace listflow
