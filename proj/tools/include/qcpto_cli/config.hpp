#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "qcpto/sim.hpp"

namespace qcpto::cli {

/// Everything a `run` invocation needs: the simulation settings and, when the
/// sweep section names an experiment, the sweep to execute.
struct RunConfig {
  SimConfig sim;
  std::optional<SweepSpec> sweep;
};

/// Parses the sectioned config document. Missing keys keep their defaults;
/// unknown keys and ill-typed values raise ConfigError naming the key path.
RunConfig config_from_json(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved document; feeding it back reproduces the same run.
nlohmann::json config_to_json(const RunConfig& cfg);

std::string_view to_string(PairCombine combine);
PairCombine combine_from_string(std::string_view name);

}  // namespace qcpto::cli
