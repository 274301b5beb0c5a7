#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "listflow/flow_state.hpp"
#include "listflow/grid.hpp"
#include "listflow/scenarios.hpp"

namespace listflow::cli {

inline constexpr const char* kToolVersion = "listflow 1.0.0";

struct GridSpec {
  std::vector<std::size_t> sizes;
  std::vector<double> periods;

  PeriodicGrid make() const { return PeriodicGrid(sizes, periods); }
  bool operator==(const GridSpec&) const = default;
};

/// Everything one `run` needs, fully resolved.
struct RunManifest {
  std::string scenario;
  ScenarioParams params;
  GridSpec grid;
  FlowConfig config;
  std::string out = "records.csv";
  std::size_t checkpoint_every = 0;
  std::string checkpoint_path;
  std::size_t fiber_size = 8;
  std::string version = kToolVersion;

  bool operator==(const RunManifest&) const = default;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Flat `key = value` lines; `#` starts a comment; blank lines are ignored.
KeyValues parse_key_values(std::string_view text);

/// Resolves a manifest from config text plus overrides (overrides win). Unknown
/// keys, malformed values and missing required keys (scenario, grid, t_end)
/// raise ConfigError naming the key.
RunManifest parse_config(std::string_view text, const KeyValues& overrides = {});
RunManifest parse_config_file(const std::filesystem::path& path, const KeyValues& overrides = {});

/// Accepted configuration keys, in documentation order.
const std::vector<std::string>& config_keys();

}  // namespace listflow::cli
