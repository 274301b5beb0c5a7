#pragma once

#include <filesystem>
#include <iosfwd>

#include "listflow/flow.hpp"

namespace listflow::cli {

// A checkpoint is a field file (header + h components then u per node) followed
// by a binary trailer: the tag "LFRUN001", t, the step counter and, when
// present, the monitor state needed to continue a run bit-identically.

void write_checkpoint(std::ostream& os, const RunCheckpoint& cp);
RunCheckpoint read_checkpoint(std::istream& is);

void save_checkpoint(const RunCheckpoint& cp, const std::filesystem::path& path);
RunCheckpoint load_checkpoint(const std::filesystem::path& path);

/// State-only convenience pair.
void checkpoint(const FlowState& state, const std::filesystem::path& path);
FlowState restore(const std::filesystem::path& path);

}  // namespace listflow::cli
