#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "listflow/diagnostics.hpp"
#include "listflow/flow_state.hpp"
#include "listflow/geometry.hpp"

namespace listflow {

struct FlowRates {
  SymTensorField dh;
  ScalarField du;
};

/// ∂_t h = −2 Ric(h) + 2 du⊗du,  ∂_t u = Δ_h u.  With `u_coupling` off the
/// metric follows plain Ricci flow.
FlowRates list_flow_rhs(const FlowState& state, const GeometryCache& cache, bool u_coupling = true);

/// W^k = h^{ij} (Γ^k_ij − Γ̊^k_ij) against the flat reference metric (Γ̊ = 0).
VectorField deturck_vector(const SymTensorField& h_inv, const ChristoffelField& gamma);
VectorField deturck_vector(const SymTensorField& h_inv, const ChristoffelField& gamma,
                           const ChristoffelField& reference);

/// W^k ∂_k f.
ScalarField advect(const ScalarField& f, const VectorField& w, StencilOrder order);

struct RhsOptions {
  bool deturck = true;
  bool evolve_metric = true;
  bool u_coupling = true;
};

/// Adds L_W h = W^k ∂_k h_ij + h_kj ∂_i W^k + h_ik ∂_j W^k to the metric rate and
/// W^k ∂_k u to the u rate. With `deturck` false this is list_flow_rhs.
FlowRates gauged_rhs(const FlowState& state, const GeometryCache& cache, bool deturck);
FlowRates flow_rhs(const FlowState& state, const GeometryCache& cache, const RhsOptions& options);

/// cfl · min Δx² / (2 · dim · Λ), Λ = max eigenvalue of h⁻¹, clamped to the time left.
double stable_dt(const FlowState& state, const GeometryCache& cache, const FlowConfig& config);

/// One explicit step. Throws DegenerationError (with time) if the new metric
/// leaves the SPD cone.
FlowState step(const FlowState& state, const FlowConfig& config);
FlowState step(const FlowState& state, const GeometryCache& cache, const FlowConfig& config);

enum class RunStatus { kCompleted, kDegenerated };

/// Restart point: the accepted state after `step` steps plus the monitor state.
struct RunCheckpoint {
  FlowState state;
  std::uint64_t step = 0;
  std::optional<MonitorSnapshot> monitor;
  bool operator==(const RunCheckpoint&) const = default;
};

struct RunOptions {
  std::size_t checkpoint_every = 0;
  std::function<void(const RunCheckpoint&)> on_checkpoint;
};

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  RunStatus status = RunStatus::kCompleted;
  std::string message;
  double mu = 0.0;
  MonitorBaseline baseline;
  std::uint64_t steps = 0;
  std::optional<FlowState> final_state;
};

RunResult run(const FlowState& initial, const FlowConfig& config, const RunOptions& options = {});

/// Continues from a checkpoint. Records already emitted before the checkpoint are not repeated.
RunResult resume(const RunCheckpoint& checkpoint, const FlowConfig& config, const RunOptions& options = {});

}  // namespace listflow
