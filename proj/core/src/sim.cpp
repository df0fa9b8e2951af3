#include "qcpto/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "qcpto/errors.hpp"
#include "qcpto/exact.hpp"
#include "qcpto/latency.hpp"
#include "qcpto/rng.hpp"

namespace qcpto {
namespace {

constexpr std::uint64_t kCpuStream = 0x637075;
constexpr std::uint64_t kRateStream = 0x72617465;
constexpr std::uint64_t kHeurStream = 0x68657572;
constexpr std::uint64_t kSnapshotStream = 0x736e6170;

std::size_t at(int i) { return static_cast<std::size_t>(i); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Vec2 boundary_point(const Region& r, double s) {
  const double w = r.width();
  const double h = r.height();
  if (s <= w) return {r.min.x + s, r.min.y};
  s -= w;
  if (s <= h) return {r.max.x, r.min.y + s};
  s -= h;
  if (s <= w) return {r.max.x - s, r.max.y};
  s -= w;
  return {r.min.x, r.max.y - s};
}

unsigned thread_cap() {
  unsigned cap = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QCPTO_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) cap = static_cast<unsigned>(v);
  }
  return cap;
}

}  // namespace

Scheme scheme_from_string(std::string_view name) {
  if (name == "exact") return Scheme::Exact;
  if (name == "heuristic") return Scheme::Heuristic;
  if (name == "go") return Scheme::Go;
  if (name == "cpto") return Scheme::Cpto;
  throw ConfigError("solver.scheme", "unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Exact:
      return "exact";
    case Scheme::Heuristic:
      return "heuristic";
    case Scheme::Go:
      return "go";
    case Scheme::Cpto:
      break;
  }
  return "cpto";
}

Experiment experiment_from_string(std::string_view name) {
  if (name == "cpu_capacity") return Experiment::CpuCapacity;
  if (name == "deadline") return Experiment::Deadline;
  if (name == "user_count") return Experiment::UserCount;
  if (name == "runtime") return Experiment::Runtime;
  throw ConfigError("sweep.experiment", "unknown experiment '" + std::string(name) + "'");
}

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::CpuCapacity:
      return "cpu_capacity";
    case Experiment::Deadline:
      return "deadline";
    case Experiment::UserCount:
      return "user_count";
    case Experiment::Runtime:
      break;
  }
  return "runtime";
}

std::vector<Worker> make_workers(const Region& region, const WorkerConfig& cfg, std::uint64_t seed) {
  if (cfg.count < 1) throw ConfigError("workers.count", "must be >= 1");
  if (!(cfg.comm_range > 0.0)) throw ConfigError("workers.comm_range", "must be positive");
  if (!(cfg.base_cpu_hz > 0.0) || cfg.cpu_step_hz < 0.0) {
    throw ConfigError("workers.base_cpu_hz", "CPU speeds must be positive");
  }
  const double perimeter = 2.0 * (region.width() + region.height());
  std::vector<Worker> out;
  for (int j = 0; j < cfg.count; ++j) {
    Rng rng(derive_seed(seed, kCpuStream, static_cast<std::uint64_t>(j)));
    Worker w;
    w.id = j;
    w.position = boundary_point(region, perimeter * j / cfg.count);
    w.cpu_hz = cfg.base_cpu_hz + cfg.cpu_step_hz * static_cast<double>(1 + rng.below(3));
    w.comm_range = cfg.comm_range;
    out.push_back(w);
  }
  return out;
}

User make_user(int vehicle_id, int num_workers, const UserConfig& cfg, std::uint64_t seed) {
  User u;
  u.id = vehicle_id;
  u.task = cfg.task;
  u.fov_range = cfg.fov_range;
  u.fov_half_angle = cfg.fov_half_angle;
  Rng rng(derive_seed(seed, kRateStream, static_cast<std::uint64_t>(vehicle_id)));
  for (int j = 0; j < num_workers; ++j) u.data_rate.push_back(rng.uniform(cfg.rate_min_bps, cfg.rate_max_bps));
  return u;
}

QmkpInstance build_instance(const QualityMatrix& quality, std::span<const User> users,
                            std::span<const Vec2> positions, std::span<const Worker> workers,
                            const SolverConfig& cfg) {
  const int n = quality.size();
  const int m = static_cast<int>(workers.size());
  if (static_cast<int>(users.size()) != n || static_cast<int>(positions.size()) != n) {
    throw std::invalid_argument("build_instance: one user and position per quality row");
  }
  std::vector<int> caps(at(m), 0);
  if (n > 0) {
    double workload = 0.0;
    double deadline = users.front().task.deadline_s;
    for (const User& u : users) {
      workload += u.task.workload_cycles;
      deadline = std::min(deadline, u.task.deadline_s);
    }
    workload /= n;
    for (int j = 0; j < m; ++j) caps[at(j)] = worker_capacity(deadline, workers[at(j)].cpu_hz, workload);
  }
  QmkpInstance inst = QmkpInstance::uniform(quality, caps);
  for (int i = 0; i < n; ++i) {
    const User& u = users[at(i)];
    for (int j = 0; j < m; ++j) {
      const Worker& w = workers[at(j)];
      const std::size_t idx = inst.index(i, j);
      inst.unit_compute[idx] = u.task.workload_cycles / w.cpu_hz;
      inst.transmit[idx] = transmit_delay(u.task.frame_bits, u.data_rate.at(at(w.id)));
      int limit = caps[at(j)];
      if (norm(positions[at(i)] - w.position) > w.comm_range) {
        limit = 0;
      } else if (cfg.strict_deadline) {
        limit = std::min(limit, max_load_within_deadline(u, w));
      }
      inst.load_limit[idx] = limit;
    }
  }
  return inst;
}

SchemeOutcome solve_with(Scheme scheme, const QmkpInstance& inst, std::span<const Vec2> positions,
                         std::span<const Worker> workers, const SolverConfig& cfg,
                         std::uint64_t seed) {
  SchemeOutcome out;
  switch (scheme) {
    case Scheme::Exact: {
      ExactOptions opts;
      opts.node_budget = cfg.node_budget;
      if (cfg.warm_start) {
        std::vector<int> everyone(at(inst.num_users()));
        std::iota(everyone.begin(), everyone.end(), 0);
        Assignment greedy =
            greedy_bin_packing(everyone, inst, Assignment(inst.num_users(), inst.num_workers()));
        repair_limits(greedy, inst);
        opts.warm_start = std::move(greedy);
      }
      try {
        out.assignment = solve_exact(inst, opts).assignment;
      } catch (const BudgetExceeded& e) {
        out.assignment = e.best().assignment;
        out.budget_exceeded = true;
      }
      break;
    }
    case Scheme::Heuristic: {
      HeurConfig hc = cfg.heuristic;
      hc.seed = seed;
      out.assignment = solve_heuristic(inst, hc).assignment;
      break;
    }
    case Scheme::Go:
      out.assignment = solve_go(inst, positions, workers, cfg.go_order);
      if (cfg.repair_baselines) repair_min_pair(out.assignment);
      break;
    case Scheme::Cpto:
      out.assignment = solve_cpto(inst);
      if (cfg.repair_baselines) repair_min_pair(out.assignment);
      break;
  }
  return out;
}

SimResult run_simulation(const Trace& trace, std::span<const Worker> workers, Scheme scheme,
                         const SimConfig& cfg) {
  if (workers.empty()) throw ConfigError("workers.count", "at least one worker is required");
  if (cfg.decision_period_slots < 1) throw ConfigError("decision_period_slots", "must be >= 1");
  PredictorConfig pcfg = cfg.predictor;
  pcfg.delta = trace.delta;
  const GridSpec grid = GridSpec::covering(cfg.scenario.region, cfg.geometry.cell_size);
  const int m = static_cast<int>(workers.size());

  SimResult result;
  std::map<int, Track> bank;
  for (const SlotRecord& rec : trace.slots) {
    std::map<int, PredictorOutput> outputs;
    try {
      outputs = run_predictor(trace, rec.slot, bank, pcfg);
    } catch (const Error& e) {
      throw Error("slot " + std::to_string(rec.slot) + ": " + e.what());
    }
    advance_bank(bank, outputs, pcfg);
    if ((rec.slot - trace.slots.front().slot) % cfg.decision_period_slots != 0) continue;

    // Queue: vehicles predicted to turn whose ROI touches the grid.
    std::vector<User> users;
    std::vector<Vec2> positions;
    std::vector<Roi> rois;
    std::vector<Triangle> fovs;
    for (const VehicleState& v : rec.vehicles) {
      const PredictorOutput& p = outputs.at(v.user_id);
      if (p.turn == Turn::Straight) continue;
      if (rasterize_triangle(p.roi.triangle, grid).none()) continue;
      users.push_back(make_user(v.user_id, m, cfg.users, cfg.seed));
      positions.push_back(v.position);
      rois.push_back(p.roi);
      fovs.push_back(fov_triangle(v, cfg.users.fov_range, cfg.users.fov_half_angle));
    }

    const CoverageScene scene(grid, rois, fovs);
    std::vector<int> local(users.size());
    std::iota(local.begin(), local.end(), 0);
    const QualityMatrix quality = scene.build_quality_matrix(local, cfg.geometry.combine);
    const QmkpInstance inst = build_instance(quality, users, positions, workers, cfg.solver);

    const auto start = std::chrono::steady_clock::now();
    SchemeOutcome outcome;
    try {
      outcome = solve_with(scheme, inst, positions, workers, cfg.solver,
                           derive_seed(cfg.seed, kHeurStream, static_cast<std::uint64_t>(rec.slot)));
    } catch (const Error& e) {
      throw Error("slot " + std::to_string(rec.slot) + ": " + e.what());
    }
    const double elapsed = seconds_since(start);

    EpochReport report = epoch_metrics(outcome.assignment, scene, users, workers, cfg.metrics);
    report.slot = rec.slot;
    report.objective = evaluate_objective(outcome.assignment, quality);
    report.budget_exceeded = outcome.budget_exceeded;
    report.solve_seconds = cfg.record_wall_time ? elapsed : 0.0;
    result.epochs.push_back(std::move(report));
  }
  result.report = run_aggregate(result.epochs);
  return result;
}

Trace scenario_trace(const SimConfig& cfg) {
  if (!cfg.trace_path.empty()) return load_trace(cfg.trace_path, cfg.scenario.delta);
  return synth_intersection(cfg.scenario, cfg.seed);
}

QmkpInstance make_snapshot_instance(int n, int m, std::uint64_t seed, const SimConfig& cfg) {
  if (n < 0) throw DomainError("n must be >= 0");
  SimConfig local = cfg;
  local.workers.count = m;
  const Region& region = cfg.scenario.region;
  const std::vector<Worker> workers = make_workers(region, local.workers, seed);
  const GridSpec grid = GridSpec::covering(region, cfg.geometry.cell_size);

  Rng rng(derive_seed(seed, kSnapshotStream));
  const Vec2 center = region.center();
  constexpr double kSpread = 30.0;
  std::vector<User> users;
  std::vector<Vec2> positions;
  std::vector<Roi> rois;
  std::vector<Triangle> fovs;
  while (static_cast<int>(users.size()) < n) {
    VehicleState v;
    v.user_id = static_cast<int>(users.size());
    v.position = center + Vec2{rng.uniform(-kSpread, kSpread), rng.uniform(-kSpread, kSpread)};
    v.heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
    v.speed = cfg.scenario.max_speed;
    const Roi roi = estimate_roi(v, rng.coin() ? Turn::Left : Turn::Right, cfg.predictor.roi_height);
    if (rasterize_triangle(roi.triangle, grid).none()) continue;
    users.push_back(make_user(v.user_id, m, cfg.users, seed));
    positions.push_back(v.position);
    rois.push_back(roi);
    fovs.push_back(fov_triangle(v, cfg.users.fov_range, cfg.users.fov_half_angle));
  }
  const CoverageScene scene(grid, rois, fovs);
  std::vector<int> ids(users.size());
  std::iota(ids.begin(), ids.end(), 0);
  return build_instance(scene.build_quality_matrix(ids, cfg.geometry.combine), users, positions,
                        workers, cfg.solver);
}

void apply_grid_value(SimConfig& cfg, Experiment e, double value) {
  if (!(value > 0.0)) throw ConfigError("sweep.grid", "values must be positive");
  switch (e) {
    case Experiment::CpuCapacity:
      cfg.workers.base_cpu_hz = value * 1e9;
      break;
    case Experiment::Deadline:
      cfg.users.task.deadline_s = value;
      break;
    case Experiment::UserCount:
    case Experiment::Runtime:
      cfg.scenario.num_vehicles = static_cast<int>(std::lround(value));
      break;
  }
  if (e == Experiment::Runtime) cfg.record_wall_time = true;
}

std::vector<std::string> sweep_metrics(Experiment e) {
  if (e == Experiment::Runtime) return {"solve_seconds", "objective"};
  return {"awareness", "delay", "intensity", "satisfaction"};
}

double metric_value(const RunReport& r, std::string_view metric, bool& defined) {
  const MetricSummary* s = nullptr;
  if (metric == "awareness") s = &r.awareness;
  else if (metric == "delay") s = &r.delay;
  else if (metric == "intensity") s = &r.intensity;
  else if (metric == "satisfaction") s = &r.satisfaction;
  else if (metric == "objective") s = &r.objective;
  else if (metric == "solve_seconds") s = &r.solve_seconds;
  else throw std::invalid_argument("unknown metric " + std::string(metric));
  defined = s->epochs > 0;
  return s->mean;
}

void confidence_interval(std::span<const double> samples, double& mean, double& lo, double& hi) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  mean = sorted.empty() ? 0.0 : std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  lo = hi = mean;
  if (sorted.size() < 2) return;
  double ss = 0.0;
  for (double x : sorted) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t dist(n - 1.0);
  const double half = boost::math::quantile(boost::math::complement(dist, 0.025)) * sd / std::sqrt(n);
  lo = mean - half;
  hi = mean + half;
}

SweepResult sweep(const SweepSpec& spec, const SimConfig& base) {
  SweepResult out;
  out.experiment = spec.experiment;
  for (double v : spec.grid) {
    if (!(v > 0.0)) throw ConfigError("sweep.grid", "values must be positive");
  }
  const std::size_t per_value = spec.schemes.size() * spec.seeds.size();
  out.rows.resize(spec.grid.size() * per_value);

  // Jobs are (grid value, seed); each job runs every scheme on the same trace.
  const std::size_t jobs = spec.grid.size() * spec.seeds.size();
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const std::size_t g = job / spec.seeds.size();
      const std::size_t s = job % spec.seeds.size();
      try {
        SimConfig cfg = base;
        cfg.seed = spec.seeds[s];
        apply_grid_value(cfg, spec.experiment, spec.grid[g]);
        const Trace trace = scenario_trace(cfg);
        const std::vector<Worker> workers = make_workers(cfg.scenario.region, cfg.workers, cfg.seed);
        for (std::size_t k = 0; k < spec.schemes.size(); ++k) {
          SweepRow& row = out.rows[g * per_value + k * spec.seeds.size() + s];
          row.value = spec.grid[g];
          row.scheme = spec.schemes[k];
          row.seed = cfg.seed;
          row.report = run_simulation(trace, workers, spec.schemes[k], cfg).report;
        }
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(thread_cap(), std::max<std::size_t>(jobs, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    for (std::size_t k = 0; k < spec.schemes.size(); ++k) {
      for (const std::string& metric : sweep_metrics(spec.experiment)) {
        std::vector<double> samples;
        for (std::size_t s = 0; s < spec.seeds.size(); ++s) {
          bool defined = false;
          const double v = metric_value(out.rows[g * per_value + k * spec.seeds.size() + s].report, metric, defined);
          if (defined) samples.push_back(v);
        }
        SweepSummary row;
        row.value = spec.grid[g];
        row.scheme = spec.schemes[k];
        row.metric = metric;
        row.samples = static_cast<int>(samples.size());
        confidence_interval(samples, row.mean, row.ci95_lo, row.ci95_hi);
        out.summary.push_back(std::move(row));
      }
    }
  }
  return out;
}

}  // namespace qcpto
