#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "listflow/flow_state.hpp"
#include "listflow/geometry.hpp"

namespace listflow {

/// One time sample of the monitored sup-norms and check outcomes.
struct DiagnosticsRecord {
  double t = 0.0;
  double sup_grad_u_sq = 0.0;
  double sup_hess_u_sq = 0.0;
  double sup_ric = 0.0;
  double sup_rm = 0.0;
  double osc_u = 0.0;
  double sup_F = 0.0;
  double sup_F1 = 0.0;
  double t_sup_rm = 0.0;
  double t_sup_hess = 0.0;
  double t_sup_grad = 0.0;
  double mono_Q = 0.0;
  double residual_grad_identity = 0.0;
  bool thm1_decay_ok = true;
  bool mono_ok = true;
  bool F_monotone_ok = true;
  bool hess_ineq_ok = true;

  bool all_checks_ok() const noexcept { return thm1_decay_ok && mono_ok && F_monotone_ok && hess_ineq_ok; }
  bool operator==(const DiagnosticsRecord&) const = default;
};

/// Run-level reference values taken at the start time t0 (the α of the bounds).
struct MonitorBaseline {
  double t0 = 0.0;
  double M0 = 0.0;  // sup|∇u|²(t0)
  double Q0 = 0.0;  // mono_Q(t0)
  bool operator==(const MonitorBaseline&) const = default;
};

/// The immediately preceding accepted step.
struct StepLink {
  const FlowState& state;
  const GeometryCache& cache;
  const DiagnosticsRecord& record;
  double mu;
};

/// Comparison-ODE bound M0 / (1 + 2 M0 (t − t0)) from dM/dt ≤ −2M².
double thm1_bound(double M0, double t0, double t);

/// 2 · c_est · (sup|Rm| + sup|∇u|²).
double required_mu(const DiagnosticsRecord& r, double c_est);

DiagnosticsRecord make_record(const FlowState& state, const GeometryCache& cache, const FlowConfig& config,
                              const MonitorBaseline& baseline, double mu, const std::optional<StepLink>& prev);

/// Sup-norm of (|∇u|²(t+dt) − |∇u|²(t))/dt − Δ_h|∇u|² + 2|D²u|² + 2|∇u|⁴ evaluated at t.
/// When `gauged`, the DeTurck advection W·∇|∇u|² is subtracted as well.
double check_grad_identity_residual(const FlowState& prev, const FlowState& next, const GeometryCache& prev_cache,
                                    const GeometryCache& next_cache, double dt, bool gauged);

struct HessianCheck {
  bool passed = true;
  double max_excess = 0.0;  // sup of (lhs − rhs)
  double slack = 0.0;
};

/// One-sided check of (∂_t − Δ_h)|D²u|² ≤ c_est (sup|Rm| + sup|∇u|²) |D²u|² + slack,
/// slack = slack_factor · (dt + Δx^order) · (1 + sup|D²u|²).
HessianCheck check_hessian_inequality(const FlowState& prev, const FlowState& next, const GeometryCache& prev_cache,
                                      const GeometryCache& next_cache, double dt, double c_est, double slack_factor,
                                      bool gauged);

std::vector<bool> check_thm1_decay(std::span<const DiagnosticsRecord> records, double M0, double t0,
                                   double tol = 0.05);

bool check_monotone_quantity(std::span<const DiagnosticsRecord> records, double tol = 1e-3);

enum class Verdict { kPass, kFail, kInconclusive };

struct FMonotoneResult {
  Verdict verdict = Verdict::kPass;
  std::optional<std::size_t> first_violation;
  double required_mu = 0.0;
};

/// sup_F nonincreasing between records that share the same μ.
FMonotoneResult check_F_monotone(std::span<const DiagnosticsRecord> records, MuSetting mu, double tol = 1e-3,
                                 double c_est = 10.0);

struct TypeIIISummary {
  double max_monitor = 0.0;  // max_t t·(sup|Rm| + sup|D²u|² + sup|∇u|²)
  double slope = 0.0;        // log-log trend over the second half of the run
  bool bounded = true;
};

inline constexpr double kTypeIIISlopeLimit = 0.1;

TypeIIISummary check_typeIII_monitors(std::span<const DiagnosticsRecord> records);

/// Everything needed to continue a monitor after restoring a checkpoint.
struct MonitorSnapshot {
  MonitorBaseline baseline;
  double mu = 0.0;
  DiagnosticsRecord last;
  DiagnosticsRecord pending;  // only the flag fields are meaningful
  bool operator==(const MonitorSnapshot&) const = default;
};

/// Stateful wrapper that resolves μ, carries the baseline and accumulates
/// per-step flags between emitted records.
class RunMonitor {
 public:
  explicit RunMonitor(const FlowConfig& config);
  RunMonitor(const FlowConfig& config, const MonitorSnapshot& snapshot);

  /// The first call (no previous step) fixes the baseline.
  DiagnosticsRecord observe(const FlowState& state, const GeometryCache& cache,
                            const FlowState* prev_state = nullptr, const GeometryCache* prev_cache = nullptr);

  /// Latest record with flags ANDed over every step since the previous emission.
  DiagnosticsRecord emit();

  double mu() const noexcept { return mu_; }
  const MonitorBaseline& baseline() const noexcept { return baseline_; }
  MonitorSnapshot snapshot() const;

 private:
  FlowConfig config_;
  MonitorBaseline baseline_;
  bool started_ = false;
  double mu_ = 0.0;
  DiagnosticsRecord last_;
  DiagnosticsRecord pending_;
};

}  // namespace listflow
