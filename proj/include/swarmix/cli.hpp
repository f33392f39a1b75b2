#pragma once

// Command-line surface: configuration layering (defaults < config file <
// SWARMIX_* environment < flags), result files and the run manifest.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swarmix/eval.hpp"
#include "swarmix/sim.hpp"

namespace swarmix::cli {

inline constexpr std::string_view tool_version = "0.1.0";
inline constexpr std::string_view env_prefix = "SWARMIX_";

enum class Command { run, sweep_churn, baseline, validate_data };

struct RunOptions {
  std::string data;
  SimConfig sim;
  // Applied to sim.churn when churn_pct > 0; otherwise churn is off.
  ChurnMode churn_mode = ChurnMode::failures;
  unsigned trials = 5;
  std::vector<double> churn_pcts{5, 10, 20, 40, 60, 80};
  std::string out = "results";

  bool operator==(const RunOptions&) const = default;
};

// Every key accepted in config files; flags use the same names with '-'
// instead of '_', environment variables are SWARMIX_<KEY>.
const std::vector<std::string>& config_keys();

// Sets one key. Throws InvalidConfig naming the key for unknown keys and
// unparsable values.
void apply_setting(RunOptions& options, std::string_view key, std::string_view value);

// Flat "key = value" lines; '#' starts a comment. Unknown keys are rejected.
void apply_config_text(RunOptions& options, std::string_view text);

// Derives sim.churn from the churn settings and validates everything.
void finalize(RunOptions& options);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
std::optional<std::string> system_env(const std::string& name);

struct Invocation {
  Command command = Command::run;
  RunOptions options;
};

// args excludes the program name; no subcommand means `run`. The config file
// comes from --config or SWARMIX_CONFIG. Returns std::nullopt after printing
// help. Throws InvalidConfig.
std::optional<Invocation> parse_config(std::span<const std::string> args,
                                       const EnvLookup& env = system_env);

// Config lines that parse back to the same options.
std::string format_config(const RunOptions& options);

struct RunManifest {
  Command command = Command::run;
  RunOptions options;
  std::string dataset_sha256;
  std::string tool_version{cli::tool_version};
  std::vector<std::uint64_t> trial_seeds;
};

// Config lines followed by '#'-prefixed metadata, so a manifest is itself a
// valid config file.
std::string format_manifest(const RunManifest& manifest);

std::string sha256_file(const std::filesystem::path& path);

// Shortest round-trip representation; "nan" for NaN.
std::string format_number(double value);

const std::vector<std::string>& metrics_columns();

std::string metrics_csv(const ExperimentResult& result);
std::string churn_csv(std::span<const ChurnRow> rows);
std::string baseline_csv(std::span<const BaselineMetrics> trials);

// Writes `content` to out_dir/name, creating out_dir. Throws IoError.
void write_file(const std::filesystem::path& out_dir, const std::string& name,
                const std::string& content);

// Full command execution; returns the process exit code.
int run_command(const Invocation& invocation, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace swarmix::cli
