#include "listflow/cli/crosscheck_report.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>

#include "listflow/error.hpp"
#include "listflow/geometry.hpp"
#include "listflow/scenarios.hpp"

namespace listflow::cli {

std::vector<std::size_t> default_ladder(int base_dim) {
  if (base_dim == 2) {
    return {32, 64, 128};
  }
  return {16, 24, 32};
}

double fitted_rate(const std::vector<double>& spacings, const std::vector<double>& errors) {
  const double n = static_cast<double>(spacings.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < spacings.size(); ++i) {
    mx += std::log(spacings[i]);
    my += std::log(errors[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < spacings.size(); ++i) {
    const double dx = std::log(spacings[i]) - mx;
    sxy += dx * (std::log(errors[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

CrossCheckReport report_cross_check(const std::string& scenario, const ScenarioParams& params, double period,
                                    StencilOrder order, std::size_t fiber_size,
                                    const std::vector<std::size_t>& ladder) {
  const int dim = scenario_dim(scenario);
  if (ladder.size() < 2) {
    throw ConfigError("cross-check needs at least two resolutions");
  }
  CrossCheckReport report;
  report.scenario = scenario;
  report.order = as_int(order);
  report.fiber_size = fiber_size;
  for (std::size_t nodes : ladder) {
    const PeriodicGrid grid = PeriodicGrid::cube(dim, nodes, period);
    const FlowState s = instantiate(scenario, grid, 0.0, params);
    const GeometryCache cache = build_cache(s.h, s.u, order);
    const WarpedMetric wm = assemble_warped(s.h, s.u, fiber_size);
    report.levels.push_back({nodes, cross_check(wm, cache, s.u, order)});
  }

  std::vector<double> dx;
  for (const auto& l : report.levels) {
    dx.push_back(l.result.spacing);
  }
  const double required = as_int(order) - kRateSlack;
  auto rate_for = [&](auto member) -> std::optional<double> {
    std::vector<double> errs;
    bool above_floor = false;
    for (const auto& l : report.levels) {
      const double e = l.result.*member;
      errs.push_back(e);
      above_floor = above_floor || e > kCrossCheckNoiseFloor;
    }
    if (!above_floor) {
      return std::nullopt;
    }
    if (std::any_of(errs.begin(), errs.end(), [](double e) { return !(e > 0.0); })) {
      return 0.0;
    }
    return fitted_rate(dx, errs);
  };
  report.base_rate = rate_for(&CrossCheckResult::base_block);
  report.fiber_rate = rate_for(&CrossCheckResult::fiber_block);
  report.scalar_rate = rate_for(&CrossCheckResult::scalar);

  for (const auto& l : report.levels) {
    const double disc = std::max({l.result.base_block, l.result.fiber_block, kCrossCheckNoiseFloor});
    report.mixed_ok = report.mixed_ok && l.result.mixed_block <= disc;
  }
  report.passed = report.mixed_ok;
  for (const auto& rate : {report.base_rate, report.fiber_rate, report.scalar_rate}) {
    if (rate && *rate < required) {
      report.passed = false;
    }
  }
  return report;
}

CrossCheckReport report_cross_check(const RunManifest& manifest) {
  const int dim = scenario_dim(manifest.scenario);
  const double period = manifest.grid.periods.empty() ? 2.0 * std::numbers::pi : manifest.grid.periods.front();
  return report_cross_check(manifest.scenario, manifest.params, period, manifest.config.order, manifest.fiber_size,
                            default_ladder(dim));
}

std::string to_json(const CrossCheckReport& report) {
  nlohmann::ordered_json j;
  j["scenario"] = report.scenario;
  j["order"] = report.order;
  j["fiber_size"] = report.fiber_size;
  auto& levels = j["levels"] = nlohmann::ordered_json::array();
  for (const auto& l : report.levels) {
    nlohmann::ordered_json e;
    e["base_size"] = l.base_size;
    e["spacing"] = l.result.spacing;
    e["base_block"] = l.result.base_block;
    e["fiber_block"] = l.result.fiber_block;
    e["mixed_block"] = l.result.mixed_block;
    e["fiber_variation"] = l.result.fiber_variation;
    e["scalar"] = l.result.scalar;
    levels.push_back(std::move(e));
  }
  auto rate = [](const std::optional<double>& r) { return r ? nlohmann::ordered_json(*r) : nlohmann::ordered_json(); };
  j["rates"] = {{"base_block", rate(report.base_rate)},
                {"fiber_block", rate(report.fiber_rate)},
                {"scalar", rate(report.scalar_rate)}};
  j["mixed_ok"] = report.mixed_ok;
  j["passed"] = report.passed;
  return j.dump(2) + "\n";
}

}  // namespace listflow::cli
