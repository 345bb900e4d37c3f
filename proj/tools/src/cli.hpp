#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adspread/optimizer.hpp"

namespace adspread::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kIoError = 3, kInfeasible = 4, kInternalError = 5 };

struct RunConfig {
  std::string subcommand;
  std::filesystem::path network;
  std::filesystem::path similarity;
  std::filesystem::path products;
  std::filesystem::path plans;
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 1;
  std::uint64_t replications = 10'000;  // simulate/oracle runs, gadget-check trials
  std::vector<double> budgets;          // one value applies to every product
  int focal = 0;
  int rounds = 3;
  int grid = 64;
  unsigned workers = 0;
  bool trajectory = false;
  bool per_node = false;
  CostModel cost;
  CrossEntropyConfig ce;
  bool horizon_set = false;
};

/// Applies `key = value` lines ([section] headers prefix keys with
/// "section."). Relative paths resolve against `base_dir`.
void apply_config_text(RunConfig& config, std::string_view text, const std::filesystem::path& base_dir);

/// Canonical text of every setting that affects results (not the output
/// directory or worker count).
std::string canonical_config(const RunConfig& config);
std::uint64_t fnv1a64(std::string_view data);

/// Parses argv (config file first, then flags on top). Throws Error(Config).
/// Returns nullopt when help was printed.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv);

/// Checks required inputs for the subcommand. Throws Error(Config).
void validate_config(const RunConfig& config);

/// Executes a validated config; throws adspread::Error on failure.
void run(const RunConfig& config);

/// Full entry point: parse, validate, run, map errors to exit codes and an
/// error JSON on stderr.
int main_entry(int argc, const char* const* argv);

}  // namespace adspread::cli
