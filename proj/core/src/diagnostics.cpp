#include "listflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "listflow/error.hpp"
#include "listflow/flow.hpp"

namespace listflow {

namespace {

// Absolute allowance for roundoff when comparing sup-values that should not grow.
constexpr double kRoundoffFloor = 1e-14;

double sup_rm_of(const GeometryCache& cache) { return std::sqrt(std::max(max_value(cache.riemann_norm_sq), 0.0)); }

double sup_of_combination(const ScalarField& a, double ca, const ScalarField& b, double cb) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t node = 0; node < a.size(); ++node) {
    m = std::max(m, ca * a[node] + cb * b[node]);
  }
  return m;
}

bool gauged(const FlowConfig& config) { return config.deturck && config.evolve_metric; }

bool not_growing(double now, double before, double tol) { return now <= before * (1.0 + tol) + kRoundoffFloor; }

}  // namespace

double thm1_bound(double M0, double t0, double t) { return M0 / (1.0 + 2.0 * M0 * (t - t0)); }

double required_mu(const DiagnosticsRecord& r, double c_est) { return 2.0 * c_est * (r.sup_rm + r.sup_grad_u_sq); }

DiagnosticsRecord make_record(const FlowState& state, const GeometryCache& cache, const FlowConfig& config,
                              const MonitorBaseline& baseline, double mu, const std::optional<StepLink>& prev) {
  DiagnosticsRecord r;
  const double t = state.t;
  const double elapsed = t - baseline.t0;
  r.t = t;
  r.sup_grad_u_sq = max_value(cache.grad_u_norm_sq);
  r.sup_hess_u_sq = max_value(cache.hess_u_norm_sq);
  r.sup_ric = sup_norm(operator_norm(cache.ricci, state.h));
  r.sup_rm = sup_rm_of(cache);
  r.osc_u = osc(state.u);
  r.sup_F = sup_of_combination(cache.hess_u_norm_sq, 1.0, cache.grad_u_norm_sq, mu);
  r.sup_F1 = sup_of_combination(cache.hess_u_norm_sq, elapsed, cache.grad_u_norm_sq, mu);
  r.t_sup_rm = t * r.sup_rm;
  r.t_sup_hess = t * r.sup_hess_u_sq;
  r.t_sup_grad = t * r.sup_grad_u_sq;
  {
    double q = -std::numeric_limits<double>::infinity();
    for (std::size_t node = 0; node < state.u.size(); ++node) {
      q = std::max(q, elapsed * cache.grad_u_norm_sq[node] + state.u[node] * state.u[node]);
    }
    r.mono_Q = q;
  }

  r.thm1_decay_ok = r.sup_grad_u_sq <= thm1_bound(baseline.M0, baseline.t0, t) * (1.0 + config.tol_decay);

  if (prev) {
    const double dt = t - prev->state.t;
    r.residual_grad_identity =
        check_grad_identity_residual(prev->state, state, prev->cache, cache, dt, gauged(config));
    r.mono_ok = r.mono_Q <= prev->record.mono_Q + config.tol_mono * (1.0 + baseline.Q0);
    if (mu == prev->mu) {
      r.F_monotone_ok = not_growing(r.sup_F, prev->record.sup_F, config.tol_F);
    }
    r.hess_ineq_ok = check_hessian_inequality(prev->state, state, prev->cache, cache, dt, config.c_est,
                                              config.hess_slack, gauged(config))
                         .passed;
  }
  return r;
}

double check_grad_identity_residual(const FlowState& prev, const FlowState& next, const GeometryCache& prev_cache,
                                    const GeometryCache& next_cache, double dt, bool gauged) {
  (void)prev;
  (void)next;
  if (!(dt > 0.0)) {
    return 0.0;
  }
  const ScalarField& g0 = prev_cache.grad_u_norm_sq;
  const ScalarField& g1 = next_cache.grad_u_norm_sq;
  const ScalarField lap = laplace_beltrami(g0, prev_cache.h_inv, prev_cache.christoffel, prev_cache.order);
  std::optional<ScalarField> adv;
  if (gauged) {
    adv = advect(g0, deturck_vector(prev_cache.h_inv, prev_cache.christoffel), prev_cache.order);
  }
  double sup = 0.0;
  for (std::size_t node = 0; node < g0.size(); ++node) {
    double r = (g1[node] - g0[node]) / dt - lap[node] + 2.0 * prev_cache.hess_u_norm_sq[node] +
               2.0 * g0[node] * g0[node];
    if (adv) {
      r -= (*adv)[node];
    }
    sup = std::max(sup, std::abs(r));
  }
  return sup;
}

HessianCheck check_hessian_inequality(const FlowState& prev, const FlowState& next, const GeometryCache& prev_cache,
                                      const GeometryCache& next_cache, double dt, double c_est, double slack_factor,
                                      bool gauged) {
  (void)next;
  HessianCheck out;
  if (!(dt > 0.0)) {
    return out;
  }
  const ScalarField& q0 = prev_cache.hess_u_norm_sq;
  const ScalarField& q1 = next_cache.hess_u_norm_sq;
  const ScalarField lap = laplace_beltrami(q0, prev_cache.h_inv, prev_cache.christoffel, prev_cache.order);
  std::optional<ScalarField> adv;
  if (gauged) {
    adv = advect(q0, deturck_vector(prev_cache.h_inv, prev_cache.christoffel), prev_cache.order);
  }
  const double scale = c_est * (sup_rm_of(prev_cache) + max_value(prev_cache.grad_u_norm_sq));
  const double dx = prev.grid().max_spacing();
  out.slack = slack_factor * (dt + std::pow(dx, as_int(prev_cache.order))) * (1.0 + max_value(q0));
  out.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t node = 0; node < q0.size(); ++node) {
    double lhs = (q1[node] - q0[node]) / dt - lap[node];
    if (adv) {
      lhs -= (*adv)[node];
    }
    out.max_excess = std::max(out.max_excess, lhs - scale * q0[node]);
  }
  out.passed = out.max_excess <= out.slack;
  return out;
}

std::vector<bool> check_thm1_decay(std::span<const DiagnosticsRecord> records, double M0, double t0, double tol) {
  if (M0 < 0.0) {
    throw Error("check_thm1_decay: M0 must be non-negative");
  }
  std::vector<bool> ok;
  ok.reserve(records.size());
  for (const auto& r : records) {
    if (M0 == 0.0 && r.sup_grad_u_sq > 0.0) {
      throw Error("check_thm1_decay: M0 = 0 but u is not constant");
    }
    ok.push_back(r.sup_grad_u_sq <= thm1_bound(M0, t0, r.t) * (1.0 + tol));
  }
  return ok;
}

bool check_monotone_quantity(std::span<const DiagnosticsRecord> records, double tol) {
  if (records.size() < 2) {
    throw Error("check_monotone_quantity: need at least two records");
  }
  const double allowance = tol * (1.0 + records.front().mono_Q);
  for (std::size_t k = 1; k < records.size(); ++k) {
    if (records[k].mono_Q > records[k - 1].mono_Q + allowance) {
      return false;
    }
  }
  return true;
}

FMonotoneResult check_F_monotone(std::span<const DiagnosticsRecord> records, MuSetting mu, double tol,
                                 double c_est) {
  FMonotoneResult out;
  std::vector<double> mus;
  mus.reserve(records.size());
  double running = 0.0;
  for (const auto& r : records) {
    out.required_mu = std::max(out.required_mu, required_mu(r, c_est));
    running = std::max(running, required_mu(r, c_est));
    mus.push_back(mu.automatic ? running : mu.value);
  }
  if (!mu.automatic && mu.value < out.required_mu) {
    out.verdict = Verdict::kInconclusive;
    return out;
  }
  for (std::size_t k = 1; k < records.size(); ++k) {
    if (mus[k] != mus[k - 1]) {
      continue;
    }
    if (!not_growing(records[k].sup_F, records[k - 1].sup_F, tol)) {
      out.verdict = Verdict::kFail;
      out.first_violation = k;
      return out;
    }
  }
  return out;
}

TypeIIISummary check_typeIII_monitors(std::span<const DiagnosticsRecord> records) {
  TypeIIISummary out;
  if (records.empty()) {
    return out;
  }
  if (!(records.front().t > 0.0)) {
    throw Error("check_typeIII_monitors: monitoring requires t0 > 0");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  const std::size_t half = records.size() / 2;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    const double m = r.t * (r.sup_rm + r.sup_hess_u_sq + r.sup_grad_u_sq);
    out.max_monitor = std::max(out.max_monitor, m);
    if (k >= half && m > 0.0) {
      xs.push_back(std::log(r.t));
      ys.push_back(std::log(m));
    }
  }
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    out.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  out.bounded = std::isfinite(out.max_monitor) && out.slope <= kTypeIIISlopeLimit;
  return out;
}

RunMonitor::RunMonitor(const FlowConfig& config) : config_(config) { baseline_.t0 = config.t0; }

RunMonitor::RunMonitor(const FlowConfig& config, const MonitorSnapshot& snapshot)
    : config_(config),
      baseline_(snapshot.baseline),
      started_(true),
      mu_(snapshot.mu),
      last_(snapshot.last),
      pending_(snapshot.pending) {}

DiagnosticsRecord RunMonitor::observe(const FlowState& state, const GeometryCache& cache,
                                      const FlowState* prev_state, const GeometryCache* prev_cache) {
  const double scales = sup_rm_of(cache) + max_value(cache.grad_u_norm_sq);
  if (!started_) {
    baseline_.M0 = max_value(cache.grad_u_norm_sq);
    double q = -std::numeric_limits<double>::infinity();
    const double elapsed = state.t - baseline_.t0;
    for (std::size_t node = 0; node < state.u.size(); ++node) {
      q = std::max(q, elapsed * cache.grad_u_norm_sq[node] + state.u[node] * state.u[node]);
    }
    baseline_.Q0 = q;
    mu_ = 0.0;
  }
  const double prev_mu = mu_;
  mu_ = config_.mu.automatic ? std::max(mu_, 2.0 * config_.c_est * scales) : config_.mu.value;

  std::optional<StepLink> link;
  if (started_ && prev_state != nullptr && prev_cache != nullptr) {
    link.emplace(StepLink{*prev_state, *prev_cache, last_, prev_mu});
  }
  DiagnosticsRecord r = make_record(state, cache, config_, baseline_, mu_, link);
  if (!started_) {
    pending_ = DiagnosticsRecord{};
    started_ = true;
  }
  pending_.thm1_decay_ok = pending_.thm1_decay_ok && r.thm1_decay_ok;
  pending_.mono_ok = pending_.mono_ok && r.mono_ok;
  pending_.F_monotone_ok = pending_.F_monotone_ok && r.F_monotone_ok;
  pending_.hess_ineq_ok = pending_.hess_ineq_ok && r.hess_ineq_ok;
  last_ = r;
  return r;
}

DiagnosticsRecord RunMonitor::emit() {
  DiagnosticsRecord out = last_;
  out.thm1_decay_ok = pending_.thm1_decay_ok;
  out.mono_ok = pending_.mono_ok;
  out.F_monotone_ok = pending_.F_monotone_ok;
  out.hess_ineq_ok = pending_.hess_ineq_ok;
  pending_ = DiagnosticsRecord{};
  return out;
}

MonitorSnapshot RunMonitor::snapshot() const { return MonitorSnapshot{baseline_, mu_, last_, pending_}; }

}  // namespace listflow
