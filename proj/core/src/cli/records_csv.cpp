#include "listflow/cli/records_csv.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "listflow/error.hpp"
#include "listflow/field_io.hpp"

namespace listflow::cli {

void write_records(std::ostream& os, std::span<const DiagnosticsRecord> records) {
  os << kRecordsHeader << '\n';
  for (const auto& r : records) {
    for (double v : {r.t, r.sup_grad_u_sq, r.sup_hess_u_sq, r.sup_ric, r.sup_rm, r.osc_u, r.sup_F, r.sup_F1,
                     r.t_sup_rm, r.mono_Q, r.residual_grad_identity}) {
      os << shortest_repr(v) << ',';
    }
    os << (r.thm1_decay_ok ? '1' : '0') << ',' << (r.mono_ok ? '1' : '0') << ',' << (r.F_monotone_ok ? '1' : '0')
       << ',' << (r.hess_ineq_ok ? '1' : '0') << '\n';
  }
}

void emit_records(std::span<const DiagnosticsRecord> records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open '" + path.string() + "' for writing");
  }
  write_records(out, records);
  if (!out.flush()) {
    throw Error("failed writing '" + path.string() + "'");
  }
}

std::vector<DiagnosticsRecord> read_records(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kRecordsHeader) {
    throw FormatError("records CSV: unexpected header");
  }
  std::vector<DiagnosticsRecord> out;
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) {
      cells.push_back(cell);
    }
    if (cells.size() != 15) {
      throw FormatError("records CSV: row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                        " cells, expected 15");
    }
    auto flag = [&](const std::string& c) {
      if (c != "0" && c != "1") {
        throw FormatError("records CSV: row " + std::to_string(row) + ": bad flag '" + c + "'");
      }
      return c == "1";
    };
    DiagnosticsRecord r;
    double* fields[] = {&r.t,     &r.sup_grad_u_sq, &r.sup_hess_u_sq, &r.sup_ric,  &r.sup_rm, &r.osc_u,
                        &r.sup_F, &r.sup_F1,        &r.t_sup_rm,      &r.mono_Q, &r.residual_grad_identity};
    for (std::size_t i = 0; i < 11; ++i) {
      *fields[i] = parse_double(cells[i]);
    }
    r.thm1_decay_ok = flag(cells[11]);
    r.mono_ok = flag(cells[12]);
    r.F_monotone_ok = flag(cells[13]);
    r.hess_ineq_ok = flag(cells[14]);
    r.t_sup_hess = r.t * r.sup_hess_u_sq;
    r.t_sup_grad = r.t * r.sup_grad_u_sq;
    out.push_back(r);
  }
  return out;
}

std::vector<DiagnosticsRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open '" + path.string() + "'");
  }
  return read_records(in);
}

}  // namespace listflow::cli
