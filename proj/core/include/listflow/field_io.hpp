#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "listflow/grid.hpp"

namespace listflow {

// Field checkpoint layout: one text line
//   LFLAB1 dim s0 s1 [s2] L0 L1 [L2]
// followed by raw little-endian binary64 values in row-major node order with
// the components of a node stored contiguously.

inline constexpr const char* kFieldMagic = "LFLAB1";

std::string format_grid_header(const PeriodicGrid& grid);
void write_grid_header(std::ostream& os, const PeriodicGrid& grid);
PeriodicGrid read_grid_header(std::istream& is);

/// Interleaves `components` node by node.
void write_payload(std::ostream& os, std::span<const ScalarField* const> components);
/// Reads `count` interleaved components; throws FormatError on a short read.
std::vector<ScalarField> read_payload(std::istream& is, const PeriodicGrid& grid, int count);

void write_f64(std::ostream& os, double v);
double read_f64(std::istream& is);
void write_u64(std::ostream& os, std::uint64_t v);
std::uint64_t read_u64(std::istream& is);

/// Shortest decimal string that parses back to the same double.
std::string shortest_repr(double v);
double parse_double(std::string_view text);

}  // namespace listflow
