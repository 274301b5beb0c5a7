#pragma once

#include <optional>
#include <string>
#include <vector>

#include "listflow/cli/manifest.hpp"
#include "listflow/warped.hpp"

namespace listflow::cli {

struct CrossCheckLevel {
  std::size_t base_size = 0;
  CrossCheckResult result;
};

/// Warped-product cross-check over a refinement ladder.
struct CrossCheckReport {
  std::string scenario;
  int order = 2;
  std::size_t fiber_size = 0;
  std::vector<CrossCheckLevel> levels;
  // Least-squares slope of log(error) against log(spacing); empty when the
  // block sits at roundoff level on every rung.
  std::optional<double> base_rate;
  std::optional<double> fiber_rate;
  std::optional<double> scalar_rate;
  bool mixed_ok = true;
  bool passed = true;
};

/// Errors below this are treated as roundoff, not discretization error.
inline constexpr double kCrossCheckNoiseFloor = 1e-10;
inline constexpr double kRateSlack = 0.4;

/// 32/64/128 nodes per axis for 2D bases, 16/24/32 for 3D bases.
std::vector<std::size_t> default_ladder(int base_dim);

CrossCheckReport report_cross_check(const RunManifest& manifest);
CrossCheckReport report_cross_check(const std::string& scenario, const ScenarioParams& params, double period,
                                    StencilOrder order, std::size_t fiber_size,
                                    const std::vector<std::size_t>& ladder);

double fitted_rate(const std::vector<double>& spacings, const std::vector<double>& errors);

/// Pretty-printed JSON; key order and number formatting are deterministic.
std::string to_json(const CrossCheckReport& report);

}  // namespace listflow::cli
