#include "listflow/cli/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "listflow/error.hpp"
#include "listflow/field_io.hpp"

namespace listflow::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return parts;
}

double as_real(const std::string& key, const std::string& value) {
  try {
    return parse_double(value);
  } catch (const FormatError&) {
    throw ConfigError("key '" + key + "': expected a real number, got '" + value + "'");
  }
}

std::size_t as_count(const std::string& key, const std::string& value) {
  std::size_t v = 0;
  const auto* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, v);
  if (value.empty() || res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + value + "'");
  }
  return v;
}

bool as_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1" || value == "yes") return true;
  if (value == "off" || value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("key '" + key + "': expected on/off, got '" + value + "'");
}

using Setter = std::function<void(RunManifest&, const std::string& key, const std::string& value)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table{
      {"scenario", [](RunManifest& m, const std::string& k, const std::string& v) {
         try {
           (void)scenario_dim(v);
         } catch (const ConfigError&) {
           throw ConfigError("key '" + k + "': unknown scenario '" + v + "'");
         }
         m.scenario = v;
       }},
      {"grid", [](RunManifest& m, const std::string& k, const std::string& v) {
         m.grid.sizes.clear();
         for (const auto& part : split(v, 'x')) {
           m.grid.sizes.push_back(as_count(k, part));
         }
         if (m.grid.sizes.size() < 2 || m.grid.sizes.size() > 3) {
           throw ConfigError("key '" + k + "': expected NxN or NxNxN, got '" + v + "'");
         }
       }},
      {"period", [](RunManifest& m, const std::string& k, const std::string& v) {
         m.grid.periods.clear();
         for (const auto& part : split(v, ',')) {
           m.grid.periods.push_back(as_real(k, part));
         }
       }},
      {"t0", [](RunManifest& m, const std::string& k, const std::string& v) { m.config.t0 = as_real(k, v); }},
      {"t_end", [](RunManifest& m, const std::string& k, const std::string& v) { m.config.t_end = as_real(k, v); }},
      {"cfl", [](RunManifest& m, const std::string& k, const std::string& v) { m.config.cfl = as_real(k, v); }},
      {"integrator", [](RunManifest& m, const std::string& k, const std::string& v) {
         try {
           m.config.integrator = parse_integrator(v);
         } catch (const ConfigError& e) {
           throw ConfigError("key '" + k + "': " + e.what());
         }
       }},
      {"order", [](RunManifest& m, const std::string& k, const std::string& v) {
         const std::size_t o = as_count(k, v);
         if (o != 2 && o != 4) {
           throw ConfigError("key '" + k + "': stencil order must be 2 or 4");
         }
         m.config.order = o == 2 ? StencilOrder::kSecond : StencilOrder::kFourth;
       }},
      {"deturck", [](RunManifest& m, const std::string& k, const std::string& v) { m.config.deturck = as_bool(k, v); }},
      {"mu", [](RunManifest& m, const std::string& k, const std::string& v) {
         m.config.mu = v == "auto" ? MuSetting{} : MuSetting::fixed(as_real(k, v));
       }},
      {"lambda_min",
       [](RunManifest& m, const std::string& k, const std::string& v) { m.config.lambda_min = as_real(k, v); }},
      {"output_every",
       [](RunManifest& m, const std::string& k, const std::string& v) { m.config.output_every = as_count(k, v); }},
      {"max_steps",
       [](RunManifest& m, const std::string& k, const std::string& v) { m.config.max_steps = as_count(k, v); }},
      {"evolve_metric",
       [](RunManifest& m, const std::string& k, const std::string& v) { m.config.evolve_metric = as_bool(k, v); }},
      {"u_coupling",
       [](RunManifest& m, const std::string& k, const std::string& v) { m.config.u_coupling = as_bool(k, v); }},
      {"c_est", [](RunManifest& m, const std::string& k, const std::string& v) { m.config.c_est = as_real(k, v); }},
      {"tol_decay",
       [](RunManifest& m, const std::string& k, const std::string& v) { m.config.tol_decay = as_real(k, v); }},
      {"tol_mono", [](RunManifest& m, const std::string& k, const std::string& v) { m.config.tol_mono = as_real(k, v); }},
      {"tol_F", [](RunManifest& m, const std::string& k, const std::string& v) { m.config.tol_F = as_real(k, v); }},
      {"hess_slack",
       [](RunManifest& m, const std::string& k, const std::string& v) { m.config.hess_slack = as_real(k, v); }},
      {"amplitude",
       [](RunManifest& m, const std::string& k, const std::string& v) { m.params.amplitude = as_real(k, v); }},
      {"phi_amplitude",
       [](RunManifest& m, const std::string& k, const std::string& v) { m.params.phi_amplitude = as_real(k, v); }},
      {"u_offset", [](RunManifest& m, const std::string& k, const std::string& v) { m.params.u_offset = as_real(k, v); }},
      {"out", [](RunManifest& m, const std::string&, const std::string& v) { m.out = v; }},
      {"checkpoint_every",
       [](RunManifest& m, const std::string& k, const std::string& v) { m.checkpoint_every = as_count(k, v); }},
      {"checkpoint", [](RunManifest& m, const std::string&, const std::string& v) { m.checkpoint_path = v; }},
      {"fiber_size", [](RunManifest& m, const std::string& k, const std::string& v) { m.fiber_size = as_count(k, v); }},
  };
  return table;
}

const Setter& find_setter(const std::string& key) {
  for (const auto& [name, setter] : setters()) {
    if (name == key) {
      return setter;
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [name, setter] : setters()) {
      out.push_back(name);
    }
    return out;
  }();
  return keys;
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) {
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(std::string_view(stripped).substr(0, eq));
    std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

RunManifest parse_config(std::string_view text, const KeyValues& overrides) {
  KeyValues all = parse_key_values(text);
  all.insert(all.end(), overrides.begin(), overrides.end());

  RunManifest m;
  std::map<std::string, bool> seen;
  for (const auto& [key, value] : all) {
    find_setter(key)(m, key, value);
    seen[key] = true;
  }
  for (const char* required : {"scenario", "grid", "t_end"}) {
    if (!seen.count(required)) {
      throw ConfigError("missing required key '" + std::string(required) + "'");
    }
  }
  const std::size_t dim = m.grid.sizes.size();
  if (static_cast<int>(dim) != scenario_dim(m.scenario)) {
    throw ConfigError("key 'grid': scenario '" + m.scenario + "' needs " + std::to_string(scenario_dim(m.scenario)) +
                      " axes");
  }
  if (m.grid.periods.empty()) {
    m.grid.periods.assign(dim, 2.0 * std::numbers::pi);
  } else if (m.grid.periods.size() == 1) {
    m.grid.periods.assign(dim, m.grid.periods.front());
  } else if (m.grid.periods.size() != dim) {
    throw ConfigError("key 'period': expected 1 or " + std::to_string(dim) + " values");
  }
  try {
    (void)m.grid.make();
  } catch (const FieldError& e) {
    throw ConfigError(std::string("key 'grid': ") + e.what());
  }
  if (m.fiber_size < PeriodicGrid::kMinNodes) {
    throw ConfigError("key 'fiber_size': need at least 8 nodes");
  }
  m.config.validate();
  return m;
}

RunManifest parse_config_file(const std::filesystem::path& path, const KeyValues& overrides) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

}  // namespace listflow::cli
