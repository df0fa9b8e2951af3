#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace qcpto::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kRuntimeError = 2,
  kOracleMismatch = 3,
};

struct RunArgs {
  std::filesystem::path config;
  std::optional<std::string> scheme;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "results";
};

/// Single run: run.json, epochs.csv, resolved_config.json.
/// Sweep (config names an experiment): sweep.json, resolved_config.json.
int cmd_run(const RunArgs& args, std::ostream& err);

struct OracleArgs {
  int n = 6;
  int m = 2;
  int count = 50;
  std::uint64_t seed = 1;
  std::filesystem::path out = "oracle";
};

/// Exhaustive vs exact vs heuristic on random instances: gap_table.csv and
/// mismatches.json. Returns kOracleMismatch when exact and exhaustive differ.
int cmd_oracle(const OracleArgs& args, std::ostream& err);

/// One tidy CSV per experiment found under results (sweep.json files).
int cmd_plotdata(const std::filesystem::path& results, const std::filesystem::path& out,
                 std::ostream& err);

/// Parses argv and dispatches to the commands above.
int main_entry(int argc, char** argv);

}  // namespace qcpto::cli
