#include "listflow/flow.hpp"

#include <cmath>
#include <limits>

#include "listflow/error.hpp"

namespace listflow {

std::string_view to_string(Integrator integrator) {
  switch (integrator) {
    case Integrator::kEuler:
      return "euler";
    case Integrator::kRk2:
      return "rk2";
    case Integrator::kRk4:
      return "rk4";
  }
  return "?";
}

Integrator parse_integrator(std::string_view name) {
  if (name == "euler") return Integrator::kEuler;
  if (name == "rk2") return Integrator::kRk2;
  if (name == "rk4") return Integrator::kRk4;
  throw ConfigError("unknown integrator '" + std::string(name) + "' (expected euler, rk2 or rk4)");
}

void FlowConfig::validate() const {
  if (!std::isfinite(t0) || !std::isfinite(t_end)) {
    throw ConfigError("t0 and t_end must be finite");
  }
  if (t_end < t0) {
    throw ConfigError("t_end must not precede t0");
  }
  if (!(cfl > 0.0 && cfl <= 1.0)) {
    throw ConfigError("cfl must lie in (0, 1]");
  }
  if (!mu.automatic && !(mu.value >= 0.0)) {
    throw ConfigError("mu must be 'auto' or a real >= 0");
  }
  if (!(lambda_min > 0.0)) {
    throw ConfigError("lambda_min must be positive");
  }
  if (output_every == 0) {
    throw ConfigError("output_every must be at least 1");
  }
  if (!(c_est >= 0.0) || !(tol_decay >= 0.0) || !(tol_mono >= 0.0) || !(tol_F >= 0.0) || !(hess_slack >= 0.0)) {
    throw ConfigError("check constants must be non-negative");
  }
}

FlowRates list_flow_rhs(const FlowState& state, const GeometryCache& cache, bool u_coupling) {
  const PeriodicGrid& grid = state.grid();
  const int n = grid.dim();
  FlowRates rates{SymTensorField(grid), cache.lap_u};
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      auto out = rates.dh(i, j).values();
      const auto ric = cache.ricci(i, j).values();
      for (std::size_t node = 0; node < grid.node_count(); ++node) {
        out[node] = -2.0 * ric[node];
      }
      if (u_coupling) {
        const auto di = cache.du[i].values();
        const auto dj = cache.du[j].values();
        for (std::size_t node = 0; node < grid.node_count(); ++node) {
          out[node] += 2.0 * di[node] * dj[node];
        }
      }
    }
  }
  return rates;
}

VectorField deturck_vector(const SymTensorField& h_inv, const ChristoffelField& gamma) {
  const PeriodicGrid& grid = h_inv.grid();
  const int n = grid.dim();
  VectorField w(grid);
  for (int k = 0; k < n; ++k) {
    auto out = w[k].values();
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double mult = i == j ? 1.0 : 2.0;
        const auto hij = h_inv(i, j).values();
        const auto g = gamma(k, i, j).values();
        for (std::size_t node = 0; node < grid.node_count(); ++node) {
          out[node] += mult * hij[node] * g[node];
        }
      }
    }
  }
  return w;
}

VectorField deturck_vector(const SymTensorField& h_inv, const ChristoffelField& gamma,
                           const ChristoffelField& reference) {
  const PeriodicGrid& grid = h_inv.grid();
  const int n = grid.dim();
  ChristoffelField diff = gamma;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        auto d = diff(k, i, j).values();
        const auto r = reference(k, i, j).values();
        for (std::size_t node = 0; node < grid.node_count(); ++node) {
          d[node] -= r[node];
        }
      }
    }
  }
  return deturck_vector(h_inv, diff);
}

ScalarField advect(const ScalarField& f, const VectorField& w, StencilOrder order) {
  ScalarField out(f.grid());
  for (int k = 0; k < w.dim(); ++k) {
    const ScalarField df = detail::d1(f, k, order);
    for (std::size_t node = 0; node < f.size(); ++node) {
      out[node] += w[k][node] * df[node];
    }
  }
  return out;
}

FlowRates flow_rhs(const FlowState& state, const GeometryCache& cache, const RhsOptions& options) {
  FlowRates rates = list_flow_rhs(state, cache, options.u_coupling);
  const PeriodicGrid& grid = state.grid();
  const int n = grid.dim();
  if (!options.evolve_metric) {
    rates.dh = SymTensorField(grid);
    return rates;
  }
  if (!options.deturck) {
    return rates;
  }
  const VectorField w = deturck_vector(cache.h_inv, cache.christoffel);
  std::vector<ScalarField> dw;  // dw[i * n + k] = ∂_i W^k
  dw.reserve(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      dw.push_back(detail::d1(w[k], i, cache.order));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      auto out = rates.dh(i, j).values();
      for (std::size_t node = 0; node < grid.node_count(); ++node) {
        double lie = 0.0;
        for (int k = 0; k < n; ++k) {
          lie += w[k][node] * cache.metric_derivs[static_cast<std::size_t>(k)](i, j)[node];
          lie += state.h(k, j)[node] * dw[static_cast<std::size_t>(i * n + k)][node];
          lie += state.h(i, k)[node] * dw[static_cast<std::size_t>(j * n + k)][node];
        }
        out[node] += lie;
      }
    }
  }
  for (int k = 0; k < n; ++k) {
    const auto wk = w[k].values();
    const auto dk = cache.du[k].values();
    auto out = rates.du.values();
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
      out[node] += wk[node] * dk[node];
    }
  }
  return rates;
}

FlowRates gauged_rhs(const FlowState& state, const GeometryCache& cache, bool deturck) {
  return flow_rhs(state, cache, RhsOptions{deturck, true, true});
}

double stable_dt(const FlowState& state, const GeometryCache& cache, const FlowConfig& config) {
  const double lambda = 1.0 / cache.metric_min_eigenvalue;
  if (!std::isfinite(lambda) || !(lambda > 0.0)) {
    throw Error("stable_dt: inverse-metric eigenvalue bound is not finite");
  }
  const PeriodicGrid& grid = state.grid();
  const double dx = grid.min_spacing();
  const double dt = config.cfl * (dx * dx) / (2.0 * grid.dim() * lambda);
  const double remaining = config.t_end - state.t;
  if (remaining <= dt * (1.0 + 1e-9)) {
    return std::max(remaining, 0.0);
  }
  return dt;
}

namespace {

// state + sum_i coef_i * rates_i
FlowState combine(const FlowState& base, double t, std::initializer_list<std::pair<double, const FlowRates*>> terms) {
  FlowState out = base;
  out.t = t;
  for (const auto& [coef, rates] : terms) {
    for (int c = 0; c < out.h.components(); ++c) {
      auto dst = out.h.component(c).values();
      const auto src = rates->dh.component(c).values();
      for (std::size_t node = 0; node < dst.size(); ++node) {
        dst[node] += coef * src[node];
      }
    }
    auto dst = out.u.values();
    const auto src = rates->du.values();
    for (std::size_t node = 0; node < dst.size(); ++node) {
      dst[node] += coef * src[node];
    }
  }
  return out;
}

RhsOptions rhs_options(const FlowConfig& config) {
  return RhsOptions{config.deturck && config.evolve_metric, config.evolve_metric, config.u_coupling};
}

}  // namespace

FlowState step(const FlowState& state, const FlowConfig& config) {
  const GeometryCache cache = build_cache(state.h, state.u, config.order, config.lambda_min);
  return step(state, cache, config);
}

FlowState step(const FlowState& state, const GeometryCache& cache, const FlowConfig& config) {
  const double dt = stable_dt(state, cache, config);
  const double t_next = dt == config.t_end - state.t ? config.t_end : state.t + dt;
  const RhsOptions options = rhs_options(config);
  auto eval = [&](const FlowState& s) {
    const GeometryCache c = build_cache(s.h, s.u, config.order, config.lambda_min);
    return flow_rhs(s, c, options);
  };

  FlowState next = state;
  try {
    const FlowRates k1 = flow_rhs(state, cache, options);
    switch (config.integrator) {
      case Integrator::kEuler:
        next = combine(state, t_next, {{dt, &k1}});
        break;
      case Integrator::kRk2: {
        const FlowRates k2 = eval(combine(state, state.t + dt, {{dt, &k1}}));
        next = combine(state, t_next, {{0.5 * dt, &k1}, {0.5 * dt, &k2}});
        break;
      }
      case Integrator::kRk4: {
        const FlowRates k2 = eval(combine(state, state.t + 0.5 * dt, {{0.5 * dt, &k1}}));
        const FlowRates k3 = eval(combine(state, state.t + 0.5 * dt, {{0.5 * dt, &k2}}));
        const FlowRates k4 = eval(combine(state, state.t + dt, {{dt, &k3}}));
        const double a = dt / 6.0;
        const double b = dt / 3.0;
        next = combine(state, t_next, {{a, &k1}, {b, &k2}, {b, &k3}, {a, &k4}});
        break;
      }
    }
    validate_metric(next.h, config.lambda_min);
  } catch (const DegenerationError& e) {
    throw e.at_time(t_next);
  }
  return next;
}

namespace {

RunResult run_loop(FlowState state, std::uint64_t steps, RunMonitor monitor, bool emit_initial,
                   const FlowConfig& config, const RunOptions& options) {
  RunResult result;
  auto finish = [&](RunStatus status, std::string message) {
    result.status = status;
    result.message = std::move(message);
    result.mu = monitor.mu();
    result.baseline = monitor.baseline();
    result.steps = steps;
    result.final_state = state;
    return result;
  };

  GeometryCache cache = [&] {
    try {
      return build_cache(state.h, state.u, config.order, config.lambda_min);
    } catch (const DegenerationError& e) {
      throw e.at_time(state.t);
    }
  }();
  if (emit_initial) {
    monitor.observe(state, cache);
    result.records.push_back(monitor.emit());
  }

  bool pending = false;
  while (state.t < config.t_end && (config.max_steps == 0 || steps < config.max_steps)) {
    try {
      FlowState next = step(state, cache, config);
      GeometryCache next_cache = build_cache(next.h, next.u, config.order, config.lambda_min);
      monitor.observe(next, next_cache, &state, &cache);
      state = std::move(next);
      cache = std::move(next_cache);
    } catch (const DegenerationError& e) {
      if (pending) {
        result.records.push_back(monitor.emit());
      }
      return finish(RunStatus::kDegenerated, e.time() ? e.what() : e.at_time(state.t).what());
    }
    ++steps;
    pending = true;
    const bool last = !(state.t < config.t_end) || (config.max_steps != 0 && steps >= config.max_steps);
    if (steps % config.output_every == 0 || last) {
      result.records.push_back(monitor.emit());
      pending = false;
    }
    if (options.checkpoint_every != 0 && options.on_checkpoint && steps % options.checkpoint_every == 0) {
      options.on_checkpoint(RunCheckpoint{state, steps, monitor.snapshot()});
    }
  }
  return finish(RunStatus::kCompleted, "completed");
}

}  // namespace

RunResult run(const FlowState& initial, const FlowConfig& config, const RunOptions& options) {
  config.validate();
  try {
    return run_loop(initial, 0, RunMonitor(config), true, config, options);
  } catch (const DegenerationError& e) {
    RunResult r;
    r.status = RunStatus::kDegenerated;
    r.message = e.what();
    return r;
  }
}

RunResult resume(const RunCheckpoint& checkpoint, const FlowConfig& config, const RunOptions& options) {
  config.validate();
  if (!checkpoint.monitor) {
    throw ConfigError("resume: checkpoint carries no monitor state");
  }
  try {
    return run_loop(checkpoint.state, checkpoint.step, RunMonitor(config, *checkpoint.monitor), false, config,
                    options);
  } catch (const DegenerationError& e) {
    RunResult r;
    r.status = RunStatus::kDegenerated;
    r.message = e.what();
    return r;
  }
}

}  // namespace listflow
