#pragma once

#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "eplag/cli/config.hpp"

namespace eplag::cli {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum class Command { Classify, Evaluate, Simulate, Sweep, Asymptotics, Picard, Nsp };

inline constexpr Command kAllCommands[] = {Command::Classify, Command::Evaluate,    Command::Simulate, Command::Sweep,
                                           Command::Asymptotics, Command::Picard, Command::Nsp};

std::string_view to_string(Command c);
std::optional<Command> parse_command(std::string_view name);

struct RunOptions {
  std::string out_dir;
  unsigned threads = 1;
};

struct OutputFile {
  std::string path;
  std::size_t rows = 0;
};

struct RunManifest {
  std::string command;
  std::string artifact_version = kArtifactVersion;
  nlohmann::json config;
  double wall_clock_seconds = 0.0;
  nlohmann::json summary;
  std::vector<OutputFile> outputs;  // CSV files only; the manifest sits beside them

  nlohmann::json to_json() const;
};

nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Flag beats the EPLAG_OUT_DIR environment variable, which beats the config.
std::string resolve_out_dir(const std::optional<std::string>& flag, const ExperimentConfig& cfg);

/// Runs one command, writes its CSVs and <prefix><command>_manifest.json into
/// options.out_dir. Module errors are rethrown with the command name prefixed.
RunManifest run(const ExperimentConfig& cfg, Command command, const RunOptions& options);

inline constexpr int kExitOk = 0;
inline constexpr int kExitOther = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Numerical failures (non-finite state, no convergence) map to 3, every other
/// library error to 2 except I/O, which joins unknown exceptions at 1.
int exit_code(const std::exception& e);

}  // namespace eplag::cli
