#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "listflow/diagnostics.hpp"

namespace listflow::cli {

inline constexpr std::string_view kRecordsHeader =
    "t,sup_grad_u_sq,sup_hess_u_sq,sup_ric,sup_rm,osc_u,sup_F,sup_F1,t_sup_rm,mono_Q,residual_grad_identity,"
    "thm1_decay_ok,mono_ok,F_monotone_ok,hess_ineq_ok";

/// Shortest round-trip decimals, booleans as 0/1, one row per record.
void write_records(std::ostream& os, std::span<const DiagnosticsRecord> records);
void emit_records(std::span<const DiagnosticsRecord> records, const std::filesystem::path& path);

/// Inverse of write_records. t_sup_hess and t_sup_grad are not stored and are
/// recomputed as t · sup.
std::vector<DiagnosticsRecord> read_records(std::istream& is);
std::vector<DiagnosticsRecord> load_records(const std::filesystem::path& path);

}  // namespace listflow::cli
