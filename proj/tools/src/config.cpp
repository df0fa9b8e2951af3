#include "qcpto_cli/config.hpp"

#include <fstream>
#include <set>

#include "qcpto/errors.hpp"

namespace qcpto::cli {
namespace {

using nlohmann::json;

// Reads keys from one JSON object and rejects anything it was not asked for.
class Section {
 public:
  Section(const json& doc, std::string path) : path_(std::move(path)) {
    if (!doc.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    doc_ = &doc;
  }

  template <typename T>
  void read(const char* key, T& target) {
    seen_.insert(key);
    if (!doc_->contains(key)) return;
    try {
      target = (*doc_)[key].get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(name(key), std::string("wrong type (") + e.what() + ")");
    }
  }

  std::optional<Section> child(const char* key) {
    seen_.insert(key);
    if (!doc_->contains(key)) return std::nullopt;
    return Section((*doc_)[key], name(key));
  }

  bool has(const char* key) const { return doc_->contains(key); }
  std::string name(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& item : doc_->items()) {
      if (!seen_.contains(item.key())) throw ConfigError(name(item.key().c_str()), "unknown key");
    }
  }

 private:
  const json* doc_ = nullptr;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Vec>
void read_fixed(Section& s, const char* key, Vec& target) {
  std::vector<double> values;
  s.read(key, values);
  if (!s.has(key)) return;
  if (values.size() != static_cast<std::size_t>(target.size())) {
    throw ConfigError(s.name(key), "expected " + std::to_string(target.size()) + " values");
  }
  for (std::size_t i = 0; i < values.size(); ++i) target(static_cast<Eigen::Index>(i)) = values[i];
}

template <typename Vec>
std::vector<double> to_vector(const Vec& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

template <typename Enum, typename Parse>
void read_enum(Section& s, const char* key, Enum& target, Parse parse) {
  std::string text;
  s.read(key, text);
  if (!s.has(key)) return;
  try {
    target = parse(text);
  } catch (const ConfigError& e) {
    throw ConfigError(s.name(key), e.what());
  }
}

Turn turn_from_string(std::string_view name) {
  if (name == "left") return Turn::Left;
  if (name == "right") return Turn::Right;
  if (name == "straight") return Turn::Straight;
  throw ConfigError("intents", "unknown turn '" + std::string(name) + "'");
}

void read_scenario(Section& s, SimConfig& cfg) {
  ScenarioConfig& sc = cfg.scenario;
  if (auto r = s.child("region")) {
    r->read("min_x", sc.region.min.x);
    r->read("min_y", sc.region.min.y);
    r->read("max_x", sc.region.max.x);
    r->read("max_y", sc.region.max.y);
    r->finish();
  }
  s.read("lanes_per_direction", sc.lanes_per_direction);
  s.read("lane_width", sc.lane_width);
  s.read("max_speed", sc.max_speed);
  s.read("min_speed_fraction", sc.min_speed_fraction);
  s.read("duration", sc.duration);
  s.read("delta", sc.delta);
  s.read("num_vehicles", sc.num_vehicles);
  s.read("p_left", sc.p_left);
  s.read("p_right", sc.p_right);
  s.read("turn_radius", sc.turn_radius);
  s.read("spawn_window", sc.spawn_window);
  std::vector<std::string> intents;
  s.read("intents", intents);
  if (s.has("intents")) {
    sc.intents.clear();
    for (const auto& t : intents) {
      try {
        sc.intents.push_back(turn_from_string(t));
      } catch (const ConfigError& e) {
        throw ConfigError(s.name("intents"), e.what());
      }
    }
  }
  s.read("trace_path", cfg.trace_path);
  s.read("decision_period_slots", cfg.decision_period_slots);
  if (auto w = s.child("workers")) {
    w->read("count", cfg.workers.count);
    w->read("comm_range", cfg.workers.comm_range);
    w->read("base_cpu_hz", cfg.workers.base_cpu_hz);
    w->read("cpu_step_hz", cfg.workers.cpu_step_hz);
    w->finish();
  }
  if (auto u = s.child("users")) {
    u->read("workload_cycles", cfg.users.task.workload_cycles);
    u->read("frame_bits", cfg.users.task.frame_bits);
    u->read("deadline_s", cfg.users.task.deadline_s);
    u->read("rate_min_bps", cfg.users.rate_min_bps);
    u->read("rate_max_bps", cfg.users.rate_max_bps);
    u->read("fov_range", cfg.users.fov_range);
    u->read("fov_half_angle", cfg.users.fov_half_angle);
    u->finish();
  }
  s.finish();
}

void read_predictor(Section& s, PredictorConfig& p) {
  read_fixed(s, "p0_diag", p.p0_diag);
  read_fixed(s, "q_diag", p.q_diag);
  read_fixed(s, "r_diag", p.r_diag);
  s.read("theta_turn", p.theta_turn);
  s.read("roi_height", p.roi_height);
  s.read("warmup_updates", p.warmup_updates);
  s.read("min_speed", p.min_speed);
  s.read("max_coast_slots", p.max_coast_slots);
  s.read("measurement_noise_std", p.measurement_noise_std);
  s.finish();
}

void read_solver(Section& s, SolverConfig& sc) {
  read_enum(s, "scheme", sc.scheme, scheme_from_string);
  s.read("alpha", sc.heuristic.alpha);
  s.read("max_iters", sc.heuristic.max_iters);
  s.read("patience", sc.heuristic.patience);
  s.read("regen_alpha_each_iter", sc.heuristic.regen_alpha_each_iter);
  s.read("memory_capacity", sc.heuristic.memory_capacity);
  s.read("node_budget", sc.node_budget);
  s.read("warm_start", sc.warm_start);
  s.read("strict_deadline", sc.strict_deadline);
  s.read("repair_baselines", sc.repair_baselines);
  read_enum(s, "go_order", sc.go_order, go_order_from_string);
  s.finish();
}

std::optional<SweepSpec> read_sweep(Section& s, SimConfig& cfg) {
  std::string experiment = "none";
  s.read("experiment", experiment);
  SweepSpec spec;
  s.read("grid", spec.grid);
  s.read("seeds", spec.seeds);
  std::vector<std::string> schemes{"exact", "heuristic", "go", "cpto"};
  s.read("schemes", schemes);
  s.read("record_wall_time", cfg.record_wall_time);
  s.finish();
  for (const auto& name : schemes) {
    try {
      spec.schemes.push_back(scheme_from_string(name));
    } catch (const ConfigError& e) {
      throw ConfigError(s.name("schemes"), e.what());
    }
  }
  if (experiment == "none") return std::nullopt;
  try {
    spec.experiment = experiment_from_string(experiment);
  } catch (const ConfigError& e) {
    throw ConfigError(s.name("experiment"), e.what());
  }
  if (spec.grid.empty()) throw ConfigError(s.name("grid"), "a sweep needs at least one value");
  if (spec.seeds.empty()) throw ConfigError(s.name("seeds"), "a sweep needs at least one seed");
  if (spec.schemes.empty()) throw ConfigError(s.name("schemes"), "a sweep needs at least one scheme");
  for (double v : spec.grid) {
    if (!(v > 0.0)) throw ConfigError(s.name("grid"), "values must be positive");
  }
  return spec;
}

}  // namespace

std::string_view to_string(PairCombine combine) {
  switch (combine) {
    case PairCombine::Max:
      return "max";
    case PairCombine::Mean:
      return "mean";
    case PairCombine::Sum:
      break;
  }
  return "sum";
}

PairCombine combine_from_string(std::string_view name) {
  if (name == "sum") return PairCombine::Sum;
  if (name == "max") return PairCombine::Max;
  if (name == "mean") return PairCombine::Mean;
  throw ConfigError("geometry.combine", "unknown combine rule '" + std::string(name) + "'");
}

RunConfig config_from_json(const json& doc) {
  RunConfig out;
  Section root(doc, "");
  root.read("seed", out.sim.seed);
  if (auto s = root.child("scenario")) read_scenario(*s, out.sim);
  if (auto s = root.child("predictor")) read_predictor(*s, out.sim.predictor);
  if (auto s = root.child("geometry")) {
    s->read("cell_size", out.sim.geometry.cell_size);
    read_enum(*s, "combine", out.sim.geometry.combine, combine_from_string);
    s->finish();
  }
  if (auto s = root.child("solver")) read_solver(*s, out.sim.solver);
  if (auto s = root.child("metrics")) {
    s->read("phi", out.sim.metrics.phi);
    s->read("assigned_only", out.sim.metrics.assigned_only);
    s->finish();
  }
  if (auto s = root.child("sweep")) out.sweep = read_sweep(*s, out.sim);
  root.finish();

  if (!(out.sim.geometry.cell_size > 0.0)) throw ConfigError("geometry.cell_size", "must be positive");
  if (!(out.sim.metrics.phi >= 0.0 && out.sim.metrics.phi <= 1.0)) {
    throw ConfigError("metrics.phi", "must lie in [0, 1]");
  }
  if (out.sim.solver.node_budget <= 0) throw ConfigError("solver.node_budget", "must be positive");
  if (out.sim.decision_period_slots < 1) {
    throw ConfigError("scenario.decision_period_slots", "must be >= 1");
  }
  const UserConfig& u = out.sim.users;
  if (!(u.task.workload_cycles > 0.0)) throw ConfigError("scenario.users.workload_cycles", "must be positive");
  if (!(u.task.frame_bits > 0.0)) throw ConfigError("scenario.users.frame_bits", "must be positive");
  if (!(u.task.deadline_s > 0.0)) throw ConfigError("scenario.users.deadline_s", "must be positive");
  if (!(u.rate_min_bps > 0.0 && u.rate_max_bps >= u.rate_min_bps)) {
    throw ConfigError("scenario.users.rate_min_bps", "rates must be positive with min <= max");
  }
  out.sim.solver.heuristic.validate();
  return out;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string(), std::string("invalid JSON: ") + e.what());
  }
  return config_from_json(doc);
}

json config_to_json(const RunConfig& cfg) {
  const SimConfig& s = cfg.sim;
  const ScenarioConfig& sc = s.scenario;
  json doc;
  doc["seed"] = s.seed;

  std::vector<std::string> intents;
  for (Turn t : sc.intents) intents.push_back(to_string(t));
  doc["scenario"] = {
      {"region", {{"min_x", sc.region.min.x}, {"min_y", sc.region.min.y},
                  {"max_x", sc.region.max.x}, {"max_y", sc.region.max.y}}},
      {"lanes_per_direction", sc.lanes_per_direction},
      {"lane_width", sc.lane_width},
      {"max_speed", sc.max_speed},
      {"min_speed_fraction", sc.min_speed_fraction},
      {"duration", sc.duration},
      {"delta", sc.delta},
      {"num_vehicles", sc.num_vehicles},
      {"p_left", sc.p_left},
      {"p_right", sc.p_right},
      {"turn_radius", sc.turn_radius},
      {"spawn_window", sc.spawn_window},
      {"intents", intents},
      {"trace_path", s.trace_path},
      {"decision_period_slots", s.decision_period_slots},
      {"workers", {{"count", s.workers.count}, {"comm_range", s.workers.comm_range},
                   {"base_cpu_hz", s.workers.base_cpu_hz}, {"cpu_step_hz", s.workers.cpu_step_hz}}},
      {"users", {{"workload_cycles", s.users.task.workload_cycles},
                 {"frame_bits", s.users.task.frame_bits},
                 {"deadline_s", s.users.task.deadline_s},
                 {"rate_min_bps", s.users.rate_min_bps},
                 {"rate_max_bps", s.users.rate_max_bps},
                 {"fov_range", s.users.fov_range},
                 {"fov_half_angle", s.users.fov_half_angle}}},
  };
  const PredictorConfig& p = s.predictor;
  doc["predictor"] = {
      {"p0_diag", to_vector(p.p0_diag)},
      {"q_diag", to_vector(p.q_diag)},
      {"r_diag", to_vector(p.r_diag)},
      {"theta_turn", p.theta_turn},
      {"roi_height", p.roi_height},
      {"warmup_updates", p.warmup_updates},
      {"min_speed", p.min_speed},
      {"max_coast_slots", p.max_coast_slots},
      {"measurement_noise_std", p.measurement_noise_std},
  };
  doc["geometry"] = {{"cell_size", s.geometry.cell_size},
                     {"combine", std::string(to_string(s.geometry.combine))}};
  const SolverConfig& so = s.solver;
  doc["solver"] = {
      {"scheme", std::string(to_string(so.scheme))},
      {"alpha", so.heuristic.alpha},
      {"max_iters", so.heuristic.max_iters},
      {"patience", so.heuristic.patience},
      {"regen_alpha_each_iter", so.heuristic.regen_alpha_each_iter},
      {"memory_capacity", so.heuristic.memory_capacity},
      {"node_budget", so.node_budget},
      {"warm_start", so.warm_start},
      {"strict_deadline", so.strict_deadline},
      {"repair_baselines", so.repair_baselines},
      {"go_order", std::string(to_string(so.go_order))},
  };
  doc["metrics"] = {{"phi", s.metrics.phi}, {"assigned_only", s.metrics.assigned_only}};

  json sweep = {{"experiment", "none"}, {"grid", json::array()}, {"seeds", json::array()},
                {"schemes", json::array()}, {"record_wall_time", s.record_wall_time}};
  if (cfg.sweep) {
    sweep["experiment"] = std::string(to_string(cfg.sweep->experiment));
    sweep["grid"] = cfg.sweep->grid;
    sweep["seeds"] = cfg.sweep->seeds;
    std::vector<std::string> names;
    for (Scheme sch : cfg.sweep->schemes) names.emplace_back(to_string(sch));
    sweep["schemes"] = names;
  } else {
    sweep["schemes"] = {"exact", "heuristic", "go", "cpto"};
  }
  doc["sweep"] = sweep;
  return doc;
}

}  // namespace qcpto::cli
