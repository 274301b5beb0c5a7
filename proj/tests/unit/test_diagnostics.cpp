#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "listflow/diagnostics.hpp"
#include "listflow/error.hpp"
#include "listflow/flow.hpp"
#include "listflow/scenarios.hpp"

namespace {

using namespace listflow;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

PeriodicGrid square(std::size_t n) { return PeriodicGrid::cube(2, n, kTwoPi); }

DiagnosticsRecord record_at(double t, double grad, double q = 0.0) {
  DiagnosticsRecord r;
  r.t = t;
  r.sup_grad_u_sq = grad;
  r.mono_Q = q;
  return r;
}

DiagnosticsRecord initial_record(const FlowState& s, const FlowConfig& cfg) {
  RunMonitor m(cfg);
  m.observe(s, build_cache(s.h, s.u, cfg.order));
  return m.emit();
}

TEST(Thm1, BoundFormula) {
  EXPECT_DOUBLE_EQ(thm1_bound(0.25, 0.0, 0.0), 0.25);
  EXPECT_DOUBLE_EQ(thm1_bound(0.25, 0.0, 2.0), 0.25 / 2.0);
  EXPECT_DOUBLE_EQ(thm1_bound(1.0, 1.0, 1.5), 0.5);
}

TEST(Thm1, ComparisonCurveIsEqualityCase) {
  std::vector<DiagnosticsRecord> rs;
  for (int k = 0; k <= 20; ++k) {
    const double t = 0.1 + 0.05 * k;
    rs.push_back(record_at(t, thm1_bound(0.8, 0.1, t)));
  }
  for (bool ok : check_thm1_decay(rs, 0.8, 0.1, 0.0)) {
    EXPECT_TRUE(ok);
  }
  rs[7].sup_grad_u_sq *= 1.0 + 1e-9;
  EXPECT_FALSE(check_thm1_decay(rs, 0.8, 0.1, 0.0)[7]);
}

TEST(Thm1, ConstantUAndErrors) {
  std::vector<DiagnosticsRecord> rs{record_at(0.0, 0.0), record_at(1.0, 0.0)};
  for (bool ok : check_thm1_decay(rs, 0.0, 0.0)) {
    EXPECT_TRUE(ok);
  }
  EXPECT_THROW(check_thm1_decay(rs, -1.0, 0.0), Error);
  rs[1].sup_grad_u_sq = 0.1;
  EXPECT_THROW(check_thm1_decay(rs, 0.0, 0.0), Error);
}

TEST(MonotoneQuantity, Checks) {
  std::vector<DiagnosticsRecord> rs{record_at(0, 0, 0.5), record_at(1, 0, 0.5), record_at(2, 0, 0.4)};
  EXPECT_TRUE(check_monotone_quantity(rs, 0.0));
  rs[2].mono_Q = 0.5 + 1e-4;
  EXPECT_TRUE(check_monotone_quantity(rs, 1e-3));
  rs[2].mono_Q = 0.51;
  EXPECT_FALSE(check_monotone_quantity(rs, 1e-3));
  EXPECT_THROW(check_monotone_quantity(std::span(rs).first(1), 1e-3), Error);
}

TEST(FMonotone, VerdictsAndFirstViolation) {
  std::vector<DiagnosticsRecord> rs(4);
  for (int k = 0; k < 4; ++k) {
    rs[k].t = k;
    rs[k].sup_rm = 0.1;
    rs[k].sup_F = 1.0 - 0.1 * k;
    rs[k].sup_F1 = 0.5;
  }
  EXPECT_EQ(check_F_monotone(rs, MuSetting::fixed(5.0), 1e-3, 10.0).verdict, Verdict::kPass);
  const auto low = check_F_monotone(rs, MuSetting::fixed(1.0), 1e-3, 10.0);
  EXPECT_EQ(low.verdict, Verdict::kInconclusive);
  EXPECT_DOUBLE_EQ(low.required_mu, 2.0);
  rs[2].sup_F = 1.5;
  const auto bad = check_F_monotone(rs, MuSetting{}, 1e-3, 10.0);
  EXPECT_EQ(bad.verdict, Verdict::kFail);
  EXPECT_EQ(bad.first_violation, 2u);
}

TEST(TypeIII, SlopeAndPreconditions) {
  std::vector<DiagnosticsRecord> rs;
  for (int k = 1; k <= 40; ++k) {
    DiagnosticsRecord r;
    r.t = 0.1 * k;
    r.sup_rm = 0.3 / r.t;  // monitor constant
    rs.push_back(r);
  }
  auto s = check_typeIII_monitors(rs);
  EXPECT_NEAR(s.slope, 0.0, 1e-12);
  EXPECT_TRUE(s.bounded);
  EXPECT_NEAR(s.max_monitor, 0.3, 1e-12);
  for (auto& r : rs) {
    r.sup_rm = r.t;  // monitor ~ t^2
  }
  s = check_typeIII_monitors(rs);
  EXPECT_NEAR(s.slope, 2.0, 1e-9);
  EXPECT_FALSE(s.bounded);
  rs.front().t = 0.0;
  EXPECT_THROW(check_typeIII_monitors(rs), Error);
}

TEST(Record, FixedPointIsAllZero) {
  const FlowState s = instantiate("fixed_point", square(16));
  const DiagnosticsRecord r = initial_record(s, FlowConfig{});
  EXPECT_EQ(r.sup_grad_u_sq, 0.0);
  EXPECT_EQ(r.sup_hess_u_sq, 0.0);
  EXPECT_EQ(r.sup_ric, 0.0);
  EXPECT_EQ(r.sup_rm, 0.0);
  EXPECT_EQ(r.osc_u, 0.0);
  EXPECT_EQ(r.sup_F, 0.0);
  EXPECT_EQ(r.mono_Q, 0.0);
  EXPECT_TRUE(r.all_checks_ok());
}

TEST(Record, ConstantUMonoQIsSquare) {
  ScenarioParams p;
  p.u_offset = -1.5;
  FlowConfig cfg;
  cfg.t_end = 0.02;
  const RunResult r = run(instantiate("conformal_bump", square(16), 0.0, p), cfg);
  for (const auto& rec : r.records) {
    EXPECT_EQ(rec.mono_Q, 2.25);
    EXPECT_EQ(rec.sup_F, 0.0);
    EXPECT_EQ(rec.residual_grad_identity, 0.0);
    EXPECT_TRUE(rec.all_checks_ok());
  }
}

TEST(Record, MatchesIndependentRescan) {
  const PeriodicGrid g = square(32);
  const FlowState s = instantiate("coupled", g, 0.0);
  FlowConfig cfg;
  cfg.mu = MuSetting::fixed(3.0);
  const GeometryCache c = build_cache(s.h, s.u, cfg.order);
  const DiagnosticsRecord r = initial_record(s, cfg);
  double grad = 0.0, hess = 0.0, rm = 0.0, lo = 1e300, hi = -1e300, f = 0.0;
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    grad = std::max(grad, c.grad_u_norm_sq[node]);
    hess = std::max(hess, c.hess_u_norm_sq[node]);
    rm = std::max(rm, std::abs(c.scalar_curv[node]));  // |Rm| = |R| in 2D
    lo = std::min(lo, s.u[node]);
    hi = std::max(hi, s.u[node]);
    f = std::max(f, c.hess_u_norm_sq[node] + 3.0 * c.grad_u_norm_sq[node]);
  }
  EXPECT_EQ(r.sup_grad_u_sq, grad);
  EXPECT_EQ(r.sup_hess_u_sq, hess);
  EXPECT_NEAR(r.sup_rm, rm, 1e-12);
  EXPECT_EQ(r.osc_u, hi - lo);
  EXPECT_EQ(r.sup_F, f);
  // At t = t0 the weight on |D^2 u|^2 in F1 vanishes.
  EXPECT_EQ(r.sup_F1, 3.0 * grad);
  // Ric = R h / 2, so its operator norm is |R| / 2.
  EXPECT_NEAR(r.sup_ric, rm / 2.0, 1e-12);
}

TEST(Record, InvariantUnderTranspose) {
  const PeriodicGrid g = square(32);
  const FlowState s = instantiate("coupled", g);
  FlowState t = s;
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    const auto idx = g.unflatten(node);
    const std::size_t m = idx[1] * 32 + idx[0];
    t.u[node] = s.u[m];
    t.h(0, 0)[node] = s.h(1, 1)[m];
    t.h(1, 1)[node] = s.h(0, 0)[m];
    t.h(0, 1)[node] = s.h(0, 1)[m];
  }
  const DiagnosticsRecord a = initial_record(s, FlowConfig{});
  const DiagnosticsRecord b = initial_record(t, FlowConfig{});
  EXPECT_NEAR(a.sup_grad_u_sq, b.sup_grad_u_sq, 1e-13);
  EXPECT_NEAR(a.sup_hess_u_sq, b.sup_hess_u_sq, 1e-13);
  EXPECT_NEAR(a.sup_rm, b.sup_rm, 1e-13);
  EXPECT_NEAR(a.sup_ric, b.sup_ric, 1e-13);
  EXPECT_EQ(a.osc_u, b.osc_u);
}

TEST(Residuals, VanishAtFixedPoint) {
  const FlowState s = instantiate("fixed_point", square(16));
  const GeometryCache c = build_cache(s.h, s.u, StencilOrder::kSecond);
  FlowState n = s;
  n.t = 0.01;
  EXPECT_EQ(check_grad_identity_residual(s, n, c, c, 0.01, true), 0.0);
  const HessianCheck h = check_hessian_inequality(s, n, c, c, 0.01, 10.0, 10.0, true);
  EXPECT_TRUE(h.passed);
  EXPECT_EQ(h.max_excess, 0.0);
}

RunResult frozen_heat(double t_end) {
  FlowConfig cfg;
  cfg.t_end = t_end;
  cfg.evolve_metric = false;
  ScenarioParams p;
  p.amplitude = 0.1;
  return run(instantiate("flat_bump_u", square(32), 0.0, p), cfg);
}

TEST(FrozenHeatFlow, MonotoneAndStrictlyBelowComparison) {
  const RunResult r = frozen_heat(0.5);
  ASSERT_EQ(r.status, RunStatus::kCompleted);
  EXPECT_TRUE(check_monotone_quantity(r.records, 1e-12));
  const double m0 = r.records.front().sup_grad_u_sq;
  for (std::size_t k = 1; k < r.records.size(); ++k) {
    EXPECT_LT(r.records[k].sup_grad_u_sq, thm1_bound(m0, 0.0, r.records[k].t));
    EXPECT_TRUE(r.records[k].all_checks_ok());
  }
}

TEST(FrozenHeatFlow, TimeWeightedGradientDecays) {
  const RunResult r = frozen_heat(3.0);
  ASSERT_GT(r.records.size(), 4u);
  const auto& last = r.records.back();
  const auto& mid = r.records[r.records.size() / 2];
  EXPECT_LT(last.t_sup_grad, mid.t_sup_grad);
  EXPECT_LT(last.t_sup_grad, 0.05 * r.records.front().sup_grad_u_sq);
}

TEST(FlatBump, ShortRunPassesAllChecks) {
  FlowConfig cfg;
  cfg.t_end = 0.2;
  const RunResult r = run(instantiate("flat_bump_u", square(32)), cfg);
  ASSERT_EQ(r.status, RunStatus::kCompleted);
  for (const auto& rec : r.records) {
    EXPECT_TRUE(rec.all_checks_ok()) << "t=" << rec.t;
  }
  EXPECT_EQ(check_F_monotone(r.records, cfg.mu, cfg.tol_F, cfg.c_est).verdict, Verdict::kPass);
  EXPECT_TRUE(check_monotone_quantity(r.records, cfg.tol_mono));
  for (bool ok : check_thm1_decay(r.records, r.baseline.M0, 0.0, cfg.tol_decay)) {
    EXPECT_TRUE(ok);
  }
}

TEST(Monitor, EmitAndsFlagsSinceLastEmission) {
  FlowConfig cfg;
  cfg.tol_decay = -1.0;  // any positive gradient violates the bound
  const FlowState s = instantiate("flat_bump_u", square(16));
  RunMonitor m(cfg);
  m.observe(s, build_cache(s.h, s.u, cfg.order));
  EXPECT_FALSE(m.emit().thm1_decay_ok);
  const FlowState z = instantiate("fixed_point", square(16));
  m.observe(z, build_cache(z.h, z.u, cfg.order));
  EXPECT_TRUE(m.emit().thm1_decay_ok);
}

TEST(Monitor, AutoMuIsRunningMaximum) {
  FlowConfig cfg;
  const FlowState s = instantiate("coupled", square(16));
  RunMonitor m(cfg);
  const DiagnosticsRecord r = m.observe(s, build_cache(s.h, s.u, cfg.order));
  EXPECT_DOUBLE_EQ(m.mu(), required_mu(r, cfg.c_est));
  const FlowState z = instantiate("fixed_point", square(16));
  m.observe(z, build_cache(z.h, z.u, cfg.order));
  EXPECT_DOUBLE_EQ(m.mu(), required_mu(r, cfg.c_est));
}

TEST(Monitor, SnapshotRestores) {
  FlowConfig cfg;
  const FlowState s = instantiate("coupled", square(16));
  RunMonitor a(cfg);
  a.observe(s, build_cache(s.h, s.u, cfg.order));
  RunMonitor b(cfg, a.snapshot());
  EXPECT_EQ(b.snapshot(), a.snapshot());
  EXPECT_EQ(b.emit(), a.emit());
}

}  // namespace
