// listflow: run List-flow scenarios, resume from checkpoints and cross-check the
// warped-product curvature identities.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "listflow/cli/checkpoint.hpp"
#include "listflow/cli/crosscheck_report.hpp"
#include "listflow/cli/manifest.hpp"
#include "listflow/cli/records_csv.hpp"
#include "listflow/error.hpp"
#include "listflow/flow.hpp"
#include "listflow/scenarios.hpp"

namespace {

using namespace listflow;

enum ExitCode : int { kOk = 0, kUsage = 1, kCheckFailed = 2, kDegenerated = 3 };

struct RunFlags {
  std::string config;
  std::optional<std::string> scenario, grid, t0, t_end, cfl, order, integrator, deturck, mu, out, checkpoint_every,
      checkpoint;
};

cli::KeyValues overrides(const RunFlags& f) {
  cli::KeyValues kv;
  auto add = [&](const char* key, const std::optional<std::string>& v) {
    if (v) {
      kv.emplace_back(key, *v);
    }
  };
  add("scenario", f.scenario);
  add("grid", f.grid);
  add("t0", f.t0);
  add("t_end", f.t_end);
  add("cfl", f.cfl);
  add("order", f.order);
  add("integrator", f.integrator);
  add("deturck", f.deturck);
  add("mu", f.mu);
  add("out", f.out);
  add("checkpoint_every", f.checkpoint_every);
  add("checkpoint", f.checkpoint);
  return kv;
}

cli::RunManifest load_manifest(const std::string& config, const cli::KeyValues& kv) {
  if (config.empty()) {
    return cli::parse_config("", kv);
  }
  return cli::parse_config_file(config, kv);
}

RunOptions checkpoint_options(const cli::RunManifest& m) {
  RunOptions options;
  if (m.checkpoint_every > 0 && !m.checkpoint_path.empty()) {
    options.checkpoint_every = m.checkpoint_every;
    const std::string path = m.checkpoint_path;
    options.on_checkpoint = [path](const RunCheckpoint& cp) { cli::save_checkpoint(cp, path); };
  }
  return options;
}

int report(const cli::RunManifest& m, const RunResult& result) {
  cli::emit_records(result.records, m.out);
  bool ok = true;
  for (const auto& r : result.records) {
    ok = ok && r.all_checks_ok();
  }
  std::printf("%s: %zu records, %llu steps, mu = %.6g, status = %s\n", m.scenario.c_str(), result.records.size(),
              static_cast<unsigned long long>(result.steps), result.mu,
              result.status == RunStatus::kCompleted ? "completed" : "degenerated");
  if (result.status == RunStatus::kDegenerated) {
    std::fprintf(stderr, "%s\n", result.message.c_str());
    return kDegenerated;
  }
  if (!ok) {
    std::fprintf(stderr, "one or more bound checks failed; see %s\n", m.out.c_str());
    return kCheckFailed;
  }
  return kOk;
}

int cmd_run(const RunFlags& flags) {
  const cli::RunManifest m = load_manifest(flags.config, overrides(flags));
  const FlowState initial = instantiate(m.scenario, m.grid.make(), m.config.t0, m.params);
  return report(m, run(initial, m.config, checkpoint_options(m)));
}

int cmd_resume(const std::string& checkpoint, const std::string& config, const std::optional<std::string>& out) {
  cli::KeyValues kv;
  if (out) {
    kv.emplace_back("out", *out);
  }
  const cli::RunManifest m = cli::parse_config_file(config, kv);
  const RunCheckpoint cp = cli::load_checkpoint(checkpoint);
  if (!(cp.state.grid() == m.grid.make())) {
    throw ConfigError("checkpoint grid does not match the config grid");
  }
  return report(m, resume(cp, m.config, checkpoint_options(m)));
}

int cmd_crosscheck(const std::string& scenario, const std::string& out, int order, std::size_t fiber_size) {
  cli::KeyValues kv{{"scenario", scenario},
                    {"t_end", "0"},
                    {"order", std::to_string(order)},
                    {"fiber_size", std::to_string(fiber_size)}};
  kv.emplace_back("grid", scenario_dim(scenario) == 2 ? "32x32" : "16x16x16");
  const cli::RunManifest m = cli::parse_config("", kv);
  const cli::CrossCheckReport rep = cli::report_cross_check(m);
  const std::string text = cli::to_json(rep);
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) {
      throw Error("cannot open '" + out + "' for writing");
    }
    f << text;
  }
  return rep.passed ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"List-flow simulator and bound-check harness"};
  app.set_version_flag("--version", std::string(cli::kToolVersion));
  app.require_subcommand(1);

  RunFlags flags;
  auto* run_cmd = app.add_subcommand("run", "integrate a scenario and write diagnostics CSV");
  run_cmd->add_option("--config", flags.config, "key = value config file");
  run_cmd->add_option("--scenario", flags.scenario);
  run_cmd->add_option("--grid", flags.grid, "NxN or NxNxN");
  run_cmd->add_option("--t0", flags.t0);
  run_cmd->add_option("--t-end", flags.t_end);
  run_cmd->add_option("--cfl", flags.cfl);
  run_cmd->add_option("--order", flags.order, "2 or 4");
  run_cmd->add_option("--integrator", flags.integrator, "euler, rk2 or rk4");
  run_cmd->add_option("--deturck", flags.deturck, "on or off");
  run_cmd->add_option("--mu", flags.mu, "auto or a real >= 0");
  run_cmd->add_option("--out", flags.out, "records CSV path");
  run_cmd->add_option("--checkpoint-every", flags.checkpoint_every);
  run_cmd->add_option("--checkpoint", flags.checkpoint);

  std::string cc_scenario;
  std::string cc_out;
  int cc_order = 2;
  std::size_t cc_fiber = 8;
  auto* cc_cmd = app.add_subcommand("crosscheck", "warped-product Ricci cross-check over a refinement ladder");
  cc_cmd->add_option("--scenario", cc_scenario)->required();
  cc_cmd->add_option("--out", cc_out, "JSON report path ('-' for stdout)");
  cc_cmd->add_option("--order", cc_order)->check(CLI::IsMember({2, 4}));
  cc_cmd->add_option("--fiber-size", cc_fiber);

  std::string rs_checkpoint;
  std::string rs_config;
  std::optional<std::string> rs_out;
  auto* rs_cmd = app.add_subcommand("resume", "continue a run from a checkpoint");
  rs_cmd->add_option("--checkpoint", rs_checkpoint)->required();
  rs_cmd->add_option("--config", rs_config)->required();
  rs_cmd->add_option("--out", rs_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (run_cmd->parsed()) {
      return cmd_run(flags);
    }
    if (cc_cmd->parsed()) {
      return cmd_crosscheck(cc_scenario, cc_out, cc_order, cc_fiber);
    }
    return cmd_resume(rs_checkpoint, rs_config, rs_out);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kUsage;
  } catch (const DegenerationError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kDegenerated;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
}
