#include "listflow/field_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "listflow/error.hpp"

namespace listflow {

namespace {

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0x00000000000000FFull) << 56) | ((v & 0x000000000000FF00ull) << 40) |
        ((v & 0x0000000000FF0000ull) << 24) | ((v & 0x00000000FF000000ull) << 8) |
        ((v & 0x000000FF00000000ull) >> 8) | ((v & 0x0000FF0000000000ull) >> 24) |
        ((v & 0x00FF000000000000ull) >> 40) | ((v & 0xFF00000000000000ull) >> 56);
  }
  return v;
}

}  // namespace

std::string shortest_repr(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw FormatError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::string format_grid_header(const PeriodicGrid& grid) {
  std::string line = kFieldMagic;
  line += ' ' + std::to_string(grid.dim());
  for (int a = 0; a < grid.dim(); ++a) {
    line += ' ' + std::to_string(grid.size(a));
  }
  for (int a = 0; a < grid.dim(); ++a) {
    line += ' ' + shortest_repr(grid.period(a));
  }
  return line;
}

void write_grid_header(std::ostream& os, const PeriodicGrid& grid) {
  os << format_grid_header(grid) << '\n';
}

PeriodicGrid read_grid_header(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) {
    throw FormatError("checkpoint: missing header line");
  }
  std::istringstream in(line);
  std::string magic;
  in >> magic;
  if (magic != kFieldMagic) {
    throw FormatError("checkpoint: bad magic '" + magic + "', expected " + kFieldMagic);
  }
  int dim = 0;
  if (!(in >> dim) || dim < 2 || dim > kMaxDim) {
    throw FormatError("checkpoint: bad dimension in header");
  }
  std::vector<std::size_t> sizes(static_cast<std::size_t>(dim));
  std::vector<double> periods(static_cast<std::size_t>(dim));
  for (auto& s : sizes) {
    if (!(in >> s)) {
      throw FormatError("checkpoint: truncated header sizes");
    }
  }
  for (auto& p : periods) {
    std::string tok;
    if (!(in >> tok)) {
      throw FormatError("checkpoint: truncated header periods");
    }
    p = parse_double(tok);
  }
  std::string extra;
  if (in >> extra) {
    throw FormatError("checkpoint: trailing header token '" + extra + "'");
  }
  try {
    return PeriodicGrid(sizes, periods);
  } catch (const FieldError& e) {
    throw FormatError(std::string("checkpoint: invalid grid: ") + e.what());
  }
}

void write_u64(std::ostream& os, std::uint64_t v) {
  const std::uint64_t le = to_little(v);
  os.write(reinterpret_cast<const char*>(&le), sizeof(le));
}

std::uint64_t read_u64(std::istream& is) {
  std::uint64_t le = 0;
  if (!is.read(reinterpret_cast<char*>(&le), sizeof(le))) {
    throw FormatError("checkpoint: truncated payload");
  }
  return to_little(le);
}

void write_f64(std::ostream& os, double v) { write_u64(os, std::bit_cast<std::uint64_t>(v)); }

double read_f64(std::istream& is) { return std::bit_cast<double>(read_u64(is)); }

void write_payload(std::ostream& os, std::span<const ScalarField* const> components) {
  if (components.empty()) {
    return;
  }
  const std::size_t nodes = components.front()->size();
  std::vector<std::uint64_t> buf(nodes * components.size());
  for (std::size_t node = 0; node < nodes; ++node) {
    for (std::size_t c = 0; c < components.size(); ++c) {
      buf[node * components.size() + c] = to_little(std::bit_cast<std::uint64_t>((*components[c])[node]));
    }
  }
  os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 8));
}

std::vector<ScalarField> read_payload(std::istream& is, const PeriodicGrid& grid, int count) {
  const std::size_t nodes = grid.node_count();
  const std::size_t ncomp = static_cast<std::size_t>(count);
  std::vector<std::uint64_t> buf(nodes * ncomp);
  if (!is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 8))) {
    throw FormatError("checkpoint: truncated payload");
  }
  std::vector<std::vector<double>> values(ncomp, std::vector<double>(nodes));
  for (std::size_t node = 0; node < nodes; ++node) {
    for (std::size_t c = 0; c < ncomp; ++c) {
      values[c][node] = std::bit_cast<double>(to_little(buf[node * ncomp + c]));
    }
  }
  std::vector<ScalarField> out;
  out.reserve(ncomp);
  for (auto& v : values) {
    try {
      out.emplace_back(grid, std::move(v));
    } catch (const FieldError& e) {
      throw FormatError(std::string("checkpoint: ") + e.what());
    }
  }
  return out;
}

}  // namespace listflow
