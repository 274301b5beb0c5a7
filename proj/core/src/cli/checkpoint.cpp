#include "listflow/cli/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "listflow/error.hpp"
#include "listflow/field_io.hpp"

namespace listflow::cli {

namespace {

constexpr std::array<char, 8> kTrailerTag{'L', 'F', 'R', 'U', 'N', '0', '0', '1'};

std::uint64_t pack_flags(const DiagnosticsRecord& r) {
  return (r.thm1_decay_ok ? 1u : 0u) | (r.mono_ok ? 2u : 0u) | (r.F_monotone_ok ? 4u : 0u) |
         (r.hess_ineq_ok ? 8u : 0u);
}

void unpack_flags(std::uint64_t bits, DiagnosticsRecord& r) {
  r.thm1_decay_ok = (bits & 1u) != 0;
  r.mono_ok = (bits & 2u) != 0;
  r.F_monotone_ok = (bits & 4u) != 0;
  r.hess_ineq_ok = (bits & 8u) != 0;
}

template <class Record, class F>
void for_each_value(Record& r, F&& f) {
  for (auto* v : {&r.t, &r.sup_grad_u_sq, &r.sup_hess_u_sq, &r.sup_ric, &r.sup_rm, &r.osc_u, &r.sup_F, &r.sup_F1,
                  &r.t_sup_rm, &r.t_sup_hess, &r.t_sup_grad, &r.mono_Q, &r.residual_grad_identity}) {
    f(*v);
  }
}

void write_record(std::ostream& os, DiagnosticsRecord r) {
  for_each_value(r, [&](double& v) { write_f64(os, v); });
  write_u64(os, pack_flags(r));
}

DiagnosticsRecord read_record(std::istream& is) {
  DiagnosticsRecord r;
  for_each_value(r, [&](double& v) { v = read_f64(is); });
  unpack_flags(read_u64(is), r);
  return r;
}

}  // namespace

void write_checkpoint(std::ostream& os, const RunCheckpoint& cp) {
  const FlowState& s = cp.state;
  write_grid_header(os, s.grid());
  std::vector<const ScalarField*> comps;
  for (int c = 0; c < s.h.components(); ++c) {
    comps.push_back(&s.h.component(c));
  }
  comps.push_back(&s.u);
  write_payload(os, comps);

  os.write(kTrailerTag.data(), kTrailerTag.size());
  write_f64(os, s.t);
  write_u64(os, cp.step);
  write_u64(os, cp.monitor ? 1 : 0);
  if (cp.monitor) {
    const MonitorSnapshot& m = *cp.monitor;
    write_f64(os, m.baseline.t0);
    write_f64(os, m.baseline.M0);
    write_f64(os, m.baseline.Q0);
    write_f64(os, m.mu);
    write_record(os, m.last);
    write_record(os, m.pending);
  }
}

RunCheckpoint read_checkpoint(std::istream& is) {
  const PeriodicGrid grid = read_grid_header(is);
  const int ncomp = SymTensorField::component_count(grid.dim());
  auto fields = read_payload(is, grid, ncomp + 1);

  RunCheckpoint cp{FlowState{0.0, SymTensorField(grid), std::move(fields.back())}, 0, std::nullopt};
  for (int c = 0; c < ncomp; ++c) {
    cp.state.h.component(c) = std::move(fields[static_cast<std::size_t>(c)]);
  }

  std::array<char, 8> tag{};
  if (!is.read(tag.data(), tag.size())) {
    throw FormatError("checkpoint: truncated trailer");
  }
  if (tag != kTrailerTag) {
    throw FormatError("checkpoint: bad trailer tag");
  }
  cp.state.t = read_f64(is);
  cp.step = read_u64(is);
  const std::uint64_t has_monitor = read_u64(is);
  if (has_monitor > 1) {
    throw FormatError("checkpoint: bad monitor marker");
  }
  if (has_monitor == 1) {
    MonitorSnapshot m;
    m.baseline.t0 = read_f64(is);
    m.baseline.M0 = read_f64(is);
    m.baseline.Q0 = read_f64(is);
    m.mu = read_f64(is);
    m.last = read_record(is);
    m.pending = read_record(is);
    cp.monitor = m;
  }
  if (is.peek() != std::char_traits<char>::eof()) {
    throw FormatError("checkpoint: trailing bytes after trailer");
  }
  return cp;
}

void save_checkpoint(const RunCheckpoint& cp, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot open '" + path.string() + "' for writing");
  }
  write_checkpoint(out, cp);
  if (!out.flush()) {
    throw Error("failed writing '" + path.string() + "'");
  }
}

RunCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open '" + path.string() + "'");
  }
  return read_checkpoint(in);
}

void checkpoint(const FlowState& state, const std::filesystem::path& path) {
  save_checkpoint(RunCheckpoint{state, 0, std::nullopt}, path);
}

FlowState restore(const std::filesystem::path& path) { return load_checkpoint(path).state; }

}  // namespace listflow::cli
