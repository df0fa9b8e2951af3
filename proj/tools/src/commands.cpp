#include "qcpto_cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcpto/errors.hpp"
#include "qcpto/exact.hpp"
#include "qcpto/heuristic.hpp"
#include "qcpto/rng.hpp"
#include "qcpto/sim.hpp"
#include "qcpto_cli/config.hpp"

namespace qcpto::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kOracleStream = 0x6f7261636c65;

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

json summary_json(const MetricSummary& s) {
  return {{"mean", s.mean}, {"min", s.min}, {"max", s.max}, {"epochs", s.epochs}};
}

json report_json(const RunReport& r) {
  return {{"epochs", r.epochs},
          {"budget_exceeded_epochs", r.budget_exceeded_epochs},
          {"awareness", summary_json(r.awareness)},
          {"delay", summary_json(r.delay)},
          {"intensity", summary_json(r.intensity)},
          {"satisfaction", summary_json(r.satisfaction)},
          {"objective", summary_json(r.objective)},
          {"solve_seconds", summary_json(r.solve_seconds)}};
}

std::string epochs_csv(const std::vector<EpochReport>& epochs, bool with_time) {
  std::string out = "slot,user_id,worker,awareness,latency_s,satisfied,epoch_objective,budget_exceeded";
  if (with_time) out += ",solve_seconds";
  out += '\n';
  for (const EpochReport& e : epochs) {
    for (const UserRecord& u : e.users) {
      out += std::to_string(e.slot) + ',' + std::to_string(u.user_id) + ',' +
             (u.worker ? std::to_string(*u.worker) : std::string()) + ',' + num(u.awareness) + ',' +
             (u.latency ? num(*u.latency) : std::string()) + ',' + (u.satisfied ? "1" : "0") + ',' +
             num(e.objective) + ',' + (e.budget_exceeded ? "1" : "0");
      if (with_time) out += ',' + num(e.solve_seconds);
      out += '\n';
    }
  }
  return out;
}

json sweep_json(const SweepResult& r) {
  json rows = json::array();
  for (const SweepRow& row : r.rows) {
    rows.push_back({{"value", row.value},
                    {"scheme", std::string(to_string(row.scheme))},
                    {"seed", row.seed},
                    {"report", report_json(row.report)}});
  }
  json summary = json::array();
  for (const SweepSummary& s : r.summary) {
    summary.push_back({{"value", s.value},
                       {"scheme", std::string(to_string(s.scheme))},
                       {"metric", s.metric},
                       {"mean", s.mean},
                       {"ci95_lo", s.ci95_lo},
                       {"ci95_hi", s.ci95_hi},
                       {"samples", s.samples}});
  }
  return {{"experiment", std::string(to_string(r.experiment))}, {"rows", rows}, {"summary", summary}};
}

template <typename Body>
int guarded(std::ostream& err, const std::string& context, Body body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error (" << context << "): " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error (" << context << "): " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace

int cmd_run(const RunArgs& args, std::ostream& err) {
  return guarded(err, args.config.string(), [&] {
    RunConfig cfg = load_config(args.config);
    if (args.scheme) {
      cfg.sim.solver.scheme = scheme_from_string(*args.scheme);
      if (cfg.sweep) cfg.sweep->schemes = {cfg.sim.solver.scheme};
    }
    if (args.seed) {
      cfg.sim.seed = *args.seed;
      if (cfg.sweep) cfg.sweep->seeds = {*args.seed};
    }
    fs::create_directories(args.out);
    write_file(args.out / "resolved_config.json", config_to_json(cfg).dump(2) + "\n");

    if (cfg.sweep) {
      const SweepResult result = sweep(*cfg.sweep, cfg.sim);
      write_file(args.out / "sweep.json", sweep_json(result).dump(2) + "\n");
      return static_cast<int>(kOk);
    }
    const Trace trace = scenario_trace(cfg.sim);
    const auto workers = make_workers(cfg.sim.scenario.region, cfg.sim.workers, cfg.sim.seed);
    const SimResult result = run_simulation(trace, workers, cfg.sim.solver.scheme, cfg.sim);
    json run = {{"scheme", std::string(to_string(cfg.sim.solver.scheme))},
                {"seed", cfg.sim.seed},
                {"report", report_json(result.report)}};
    write_file(args.out / "run.json", run.dump(2) + "\n");
    write_file(args.out / "epochs.csv", epochs_csv(result.epochs, cfg.sim.record_wall_time));
    return static_cast<int>(kOk);
  });
}

int cmd_oracle(const OracleArgs& args, std::ostream& err) {
  return guarded(err, "oracle", [&] {
    if (args.n < 1 || args.n > 12) throw ConfigError("n", "must lie in [1, 12]");
    if (args.m < 1 || args.m > 3) throw ConfigError("m", "must lie in [1, 3]");
    if (args.count < 0) throw ConfigError("count", "must be >= 0");
    fs::create_directories(args.out);

    std::string table = "instance,n,m,exhaustive,exact,heuristic,gap,match\n";
    json mismatches = json::array();
    for (int k = 0; k < args.count; ++k) {
      Rng rng(derive_seed(args.seed, kOracleStream, static_cast<std::uint64_t>(k)));
      QualityMatrix q(args.n);
      for (int i = 0; i < args.n; ++i) {
        for (int j = i + 1; j < args.n; ++j) q.set(i, j, rng.unit());
      }
      std::vector<int> caps;
      for (int j = 0; j < args.m; ++j) caps.push_back(static_cast<int>(rng.between(0, args.n)));
      const QmkpInstance inst = QmkpInstance::uniform(std::move(q), std::move(caps));

      const Solution brute = solve_exhaustive(inst);
      const Solution exact = solve_exact(inst);
      HeurConfig hc;
      hc.seed = derive_seed(args.seed, kOracleStream + 1, static_cast<std::uint64_t>(k));
      const Solution heur = solve_heuristic(inst, hc);

      const bool match = exact.objective == brute.objective;
      const double gap = brute.objective > 0.0 ? (brute.objective - heur.objective) / brute.objective : 0.0;
      table += std::to_string(k) + ',' + std::to_string(args.n) + ',' + std::to_string(args.m) + ',' +
               num(brute.objective) + ',' + num(exact.objective) + ',' + num(heur.objective) + ',' +
               num(gap) + ',' + (match ? "1" : "0") + '\n';
      if (!match) {
        mismatches.push_back({{"instance", k},
                              {"exhaustive", brute.objective},
                              {"exact", exact.objective},
                              {"qmkp", json::parse(to_json(inst))}});
      }
    }
    write_file(args.out / "gap_table.csv", table);
    write_file(args.out / "mismatches.json", mismatches.dump(2) + "\n");
    if (!mismatches.empty()) {
      err << mismatches.size() << " exact/exhaustive mismatches; see "
          << (args.out / "mismatches.json").string() << '\n';
      return static_cast<int>(kOracleMismatch);
    }
    return static_cast<int>(kOk);
  });
}

int cmd_plotdata(const fs::path& results, const fs::path& out, std::ostream& err) {
  return guarded(err, results.string(), [&] {
    std::vector<fs::path> files;
    if (fs::is_directory(results)) {
      for (const auto& entry : fs::recursive_directory_iterator(results)) {
        if (entry.is_regular_file() && entry.path().filename() == "sweep.json") files.push_back(entry.path());
      }
    }
    if (files.empty()) throw MissingResults("no sweep.json under " + results.string());
    std::sort(files.begin(), files.end());

    std::map<std::string, std::string> tables;
    for (const fs::path& file : files) {
      std::ifstream in(file);
      json doc;
      try {
        doc = json::parse(in);
        const std::string experiment = doc.at("experiment").get<std::string>();
        std::string& table = tables[experiment];
        if (table.empty()) table = "sweep_var,scheme,metric,mean,ci95_lo,ci95_hi\n";
        for (const json& row : doc.at("summary")) {
          table += num(row.at("value").get<double>()) + ',' + row.at("scheme").get<std::string>() + ',' +
                   row.at("metric").get<std::string>() + ',' + num(row.at("mean").get<double>()) + ',' +
                   num(row.at("ci95_lo").get<double>()) + ',' + num(row.at("ci95_hi").get<double>()) + '\n';
        }
      } catch (const json::exception& e) {
        throw ParseError(0, file.string() + ": " + e.what());
      }
    }
    fs::create_directories(out);
    for (const auto& [experiment, table] : tables) write_file(out / (experiment + ".csv"), table);
    return static_cast<int>(kOk);
  });
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Quality-aware cooperative perception task offloading simulator"};
  app.require_subcommand(1);

  RunArgs run;
  std::string scheme;
  std::uint64_t seed = 0;
  auto* run_cmd = app.add_subcommand("run", "Run a simulation or sweep from a config file");
  run_cmd->add_option("--config", run.config, "Config JSON")->required();
  auto* scheme_opt = run_cmd->add_option("--scheme", scheme, "exact | heuristic | go | cpto");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the seed");
  run_cmd->add_option("--out", run.out, "Output directory");

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Check the exact solver against brute force");
  oracle_cmd->add_option("--n", oracle.n, "Users per instance (<= 12)");
  oracle_cmd->add_option("--m", oracle.m, "Workers per instance (<= 3)");
  oracle_cmd->add_option("--count", oracle.count, "Number of instances");
  oracle_cmd->add_option("--seed", oracle.seed, "Seed");
  oracle_cmd->add_option("--out", oracle.out, "Output directory");

  fs::path results;
  fs::path plot_out = "plotdata";
  auto* plot_cmd = app.add_subcommand("plotdata", "Tidy CSVs from sweep results");
  plot_cmd->add_option("--results", results, "Directory holding sweep.json files")->required();
  plot_cmd->add_option("--out", plot_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(kConfigError);
  }

  if (*run_cmd) {
    if (*scheme_opt) run.scheme = scheme;
    if (*seed_opt) run.seed = seed;
    return cmd_run(run, std::cerr);
  }
  if (*oracle_cmd) return cmd_oracle(oracle, std::cerr);
  return cmd_plotdata(results, plot_out, std::cerr);
}

}  // namespace qcpto::cli
