#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eplag/cli/commands.hpp"
#include "eplag/error.hpp"

namespace {

std::string describe(eplag::cli::Command c) {
  using eplag::cli::Command;
  switch (c) {
    case Command::Classify: return "per-point blow-up test and global verdict";
    case Command::Evaluate: return "closed-form flow on a (t, x) grid";
    case Command::Simulate: return "particle simulation";
    case Command::Sweep: return "verdict scan and critical parameter over a data family";
    case Command::Asymptotics: return "L1 distance to the limit profile and decay-rate fit";
    case Command::Picard: return "fixed-point iteration checked against the closed form";
    case Command::Nsp: return "Riccati blow-up bound for the viscous model";
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  using namespace eplag::cli;

  CLI::App app{"Lagrangian solutions, blow-up thresholds and asymptotics of damped pressureless Euler-Poisson flow"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::string> out_dir;
  unsigned threads = 1;
  std::optional<long long> seed;  // accepted for scripting; every method is deterministic

  for (Command c : kAllCommands) {
    CLI::App* sub = app.add_subcommand(std::string(to_string(c)), describe(c));
    sub->add_option("--config", config_path, "YAML or JSON experiment file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides EPLAG_OUT_DIR and the config)");
    sub->add_option("--threads", threads, "worker threads for sweeps")->check(CLI::Range(1u, 1024u));
    sub->add_option("--seed", seed, "reserved; ignored");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const Command command = *parse_command(chosen->get_name());
  try {
    const ExperimentConfig cfg = load_config(config_path);
    const RunManifest m = run(cfg, command, {resolve_out_dir(out_dir, cfg), threads});
    std::cout << m.summary.dump(2) << '\n';
    for (const OutputFile& f : m.outputs) std::cout << f.path << " (" << f.rows << " rows)\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e);
  }
}
