#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcpto/errors.hpp"
#include "qcpto_cli/commands.hpp"
#include "qcpto_cli/config.hpp"

using namespace qcpto;
using namespace qcpto::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qcpto_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

const char* kSmallRun = R"({"seed": 3, "scenario": {"num_vehicles": 12, "duration": 20}})";

}  // namespace

TEST(Config, DefaultsAndOverrides) {
  const RunConfig cfg = config_from_json(nlohmann::json::parse(
      R"({"seed": 9, "solver": {"scheme": "exact", "alpha": 0.2}, "geometry": {"combine": "max"}})"));
  EXPECT_EQ(cfg.sim.seed, 9u);
  EXPECT_EQ(cfg.sim.solver.scheme, Scheme::Exact);
  EXPECT_DOUBLE_EQ(cfg.sim.solver.heuristic.alpha, 0.2);
  EXPECT_EQ(cfg.sim.geometry.combine, PairCombine::Max);
  EXPECT_EQ(cfg.sim.workers.count, 8);
  EXPECT_FALSE(cfg.sweep.has_value());
}

TEST(Config, UnknownKeyIsNamed) {
  try {
    config_from_json(nlohmann::json::parse(R"({"solver": {"alhpa": 0.2}})"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "solver.alhpa");
  }
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"solver": {"alpha": "x"}})")), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"solver": {"scheme": "magic"}})")), ConfigError);
}

TEST(Config, ResolvedDocumentRoundTrips) {
  const RunConfig cfg = config_from_json(nlohmann::json::parse(
      R"({"seed": 4, "scenario": {"num_vehicles": 7}, "sweep": {"experiment": "deadline", "grid": [0.4, 0.5], "seeds": [1, 2], "schemes": ["go"]}})"));
  ASSERT_TRUE(cfg.sweep.has_value());
  const nlohmann::json doc = config_to_json(cfg);
  EXPECT_EQ(config_to_json(config_from_json(doc)), doc);
}

TEST(CmdRun, HappyPathWritesOutputs) {
  const fs::path dir = scratch("run");
  std::ostringstream err;
  RunArgs args;
  args.config = write_config(dir, kSmallRun);
  args.out = dir / "out";
  ASSERT_EQ(cmd_run(args, err), kOk) << err.str();
  EXPECT_TRUE(fs::exists(args.out / "run.json"));
  EXPECT_TRUE(fs::exists(args.out / "epochs.csv"));
  EXPECT_TRUE(fs::exists(args.out / "resolved_config.json"));
  EXPECT_EQ(slurp(args.out / "epochs.csv").rfind("slot,user_id,worker", 0), 0u);

  // Re-running from the resolved config reproduces the run.
  RunArgs again = args;
  again.config = args.out / "resolved_config.json";
  again.out = dir / "again";
  ASSERT_EQ(cmd_run(again, err), kOk);
  EXPECT_EQ(slurp(again.out / "run.json"), slurp(args.out / "run.json"));
  EXPECT_EQ(slurp(again.out / "epochs.csv"), slurp(args.out / "epochs.csv"));
}

TEST(CmdRun, SeedOverrideIsDeterministic) {
  const fs::path dir = scratch("seed");
  std::ostringstream err;
  RunArgs args;
  args.config = write_config(dir, kSmallRun);
  args.seed = 42;
  args.out = dir / "a";
  ASSERT_EQ(cmd_run(args, err), kOk);
  args.out = dir / "b";
  ASSERT_EQ(cmd_run(args, err), kOk);
  EXPECT_EQ(slurp(dir / "a" / "epochs.csv"), slurp(dir / "b" / "epochs.csv"));
  EXPECT_NE(slurp(dir / "a" / "resolved_config.json").find("42"), std::string::npos);
}

TEST(CmdRun, ErrorsMapToExitCodes) {
  const fs::path dir = scratch("errors");
  std::ostringstream err;
  RunArgs args;
  args.config = write_config(dir, kSmallRun);
  args.scheme = "magic";
  args.out = dir / "out";
  EXPECT_EQ(cmd_run(args, err), kConfigError);
  EXPECT_NE(err.str().find("solver.scheme"), std::string::npos);

  args.scheme.reset();
  args.config = write_config(dir, R"({"bogus": 1})");
  EXPECT_EQ(cmd_run(args, err), kConfigError);
  args.config = dir / "missing.json";
  EXPECT_NE(cmd_run(args, err), kOk);
  args.config = write_config(dir, R"({"scenario": {"trace_path": "/nonexistent/trace.csv"}})");
  EXPECT_EQ(cmd_run(args, err), kRuntimeError);
}

TEST(CmdOracle, CleanRunAndEmptyTable) {
  const fs::path dir = scratch("oracle");
  std::ostringstream err;
  OracleArgs args;
  args.count = 20;
  args.out = dir / "a";
  ASSERT_EQ(cmd_oracle(args, err), kOk) << err.str();
  const std::string table = slurp(args.out / "gap_table.csv");
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 21);
  EXPECT_EQ(slurp(args.out / "mismatches.json").find("\"instance\""), std::string::npos);

  args.count = 0;
  args.out = dir / "empty";
  ASSERT_EQ(cmd_oracle(args, err), kOk);
  const std::string empty = slurp(args.out / "gap_table.csv");
  EXPECT_EQ(std::count(empty.begin(), empty.end(), '\n'), 1);

  args.m = 9;
  EXPECT_EQ(cmd_oracle(args, err), kConfigError);
}

TEST(CmdPlotdata, TidyCsvAndMissingResults) {
  const fs::path dir = scratch("plot");
  std::ostringstream err;
  EXPECT_EQ(cmd_plotdata(dir / "nothing", dir / "plots", err), kRuntimeError);
  fs::create_directories(dir / "empty");
  EXPECT_EQ(cmd_plotdata(dir / "empty", dir / "plots", err), kRuntimeError);

  RunArgs args;
  args.config = write_config(dir,
                             R"({"scenario": {"num_vehicles": 10, "duration": 15},
                                 "sweep": {"experiment": "cpu_capacity", "grid": [1, 2], "seeds": [1, 2],
                                           "schemes": ["exact", "go"]}})");
  args.out = dir / "results" / "cpu";
  ASSERT_EQ(cmd_run(args, err), kOk) << err.str();
  ASSERT_EQ(cmd_plotdata(dir / "results", dir / "plots", err), kOk) << err.str();
  const std::string csv = slurp(dir / "plots" / "cpu_capacity.csv");
  EXPECT_EQ(csv.rfind("sweep_var,scheme,metric,mean,ci95_lo,ci95_hi\n", 0), 0u);
  // 2 grid values × 2 schemes × 4 metrics.
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 16);
  ASSERT_EQ(cmd_plotdata(dir / "results", dir / "plots", err), kOk);
  EXPECT_EQ(slurp(dir / "plots" / "cpu_capacity.csv"), csv);
}
