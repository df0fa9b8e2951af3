#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcpto/baselines.hpp"
#include "qcpto/geometry.hpp"
#include "qcpto/heuristic.hpp"
#include "qcpto/metrics.hpp"
#include "qcpto/predict.hpp"
#include "qcpto/qmkp.hpp"
#include "qcpto/trace.hpp"

namespace qcpto {

enum class Scheme { Exact, Heuristic, Go, Cpto };

Scheme scheme_from_string(std::string_view name);
std::string_view to_string(Scheme scheme);

struct WorkerConfig {
  int count = 8;
  double comm_range = 200.0;
  double base_cpu_hz = 2e9;  // C_j = base + k·step, k drawn from {1, 2, 3}
  double cpu_step_hz = 1e9;
};

struct UserConfig {
  TaskProfile task;
  double rate_min_bps = 15e6;
  double rate_max_bps = 18e6;
  double fov_range = 20.0;
  double fov_half_angle = std::numbers::pi / 4.0;
};

struct GeometryConfig {
  double cell_size = 0.5;
  PairCombine combine = PairCombine::Sum;
};

struct SolverConfig {
  Scheme scheme = Scheme::Heuristic;
  HeurConfig heuristic;            // its seed is replaced per epoch
  std::int64_t node_budget = 2'000'000;
  bool warm_start = true;          // seed the exact search with the repaired greedy
  bool strict_deadline = true;     // also enforce t_ij(η_j) ≤ κ_i per user
  bool repair_baselines = true;    // drop lone users from GO/CPTO workers
  GoOrder go_order = GoOrder::Fill;
};

struct SimConfig {
  std::uint64_t seed = 1;
  ScenarioConfig scenario;
  std::string trace_path;  // empty: synthesize the intersection scenario
  WorkerConfig workers;
  UserConfig users;
  PredictorConfig predictor;
  GeometryConfig geometry;
  SolverConfig solver;
  MetricsConfig metrics;
  int decision_period_slots = 1;
  bool record_wall_time = false;  // wall time makes outputs machine dependent
};

/// Workers spread evenly along the region boundary starting at the min
/// corner (corners and edge midpoints for eight workers). CPU speeds are
/// seeded draws.
std::vector<Worker> make_workers(const Region& region, const WorkerConfig& cfg, std::uint64_t seed);

/// User for one vehicle; data rates to each worker are seeded per vehicle and
/// held for the whole run.
User make_user(int vehicle_id, int num_workers, const UserConfig& cfg, std::uint64_t seed);

/// QMKP instance over the queued users. Capacities follow the deadline bound
/// with the queue's mean workload and tightest deadline; pairs out of range
/// get limit 0, and with strict_deadline each limit is also capped by the
/// largest load meeting that user's deadline.
QmkpInstance build_instance(const QualityMatrix& quality, std::span<const User> users,
                            std::span<const Vec2> positions, std::span<const Worker> workers,
                            const SolverConfig& cfg);

struct SchemeOutcome {
  Assignment assignment;
  bool budget_exceeded = false;
};

SchemeOutcome solve_with(Scheme scheme, const QmkpInstance& inst, std::span<const Vec2> positions,
                         std::span<const Worker> workers, const SolverConfig& cfg,
                         std::uint64_t seed);

struct SimResult {
  RunReport report;
  std::vector<EpochReport> epochs;
};

/// Controller loop: per slot update the trackers; per decision epoch queue
/// the vehicles predicted to turn, build their instance, solve and measure.
SimResult run_simulation(const Trace& trace, std::span<const Worker> workers, Scheme scheme,
                         const SimConfig& cfg);

/// Trace named by cfg.trace_path, or the synthetic intersection.
Trace scenario_trace(const SimConfig& cfg);

/// Random turning vehicles around the intersection center: n users, m
/// workers, quality from the occupancy geometry. Used for timing comparisons.
QmkpInstance make_snapshot_instance(int n, int m, std::uint64_t seed, const SimConfig& cfg = {});

enum class Experiment { CpuCapacity, Deadline, UserCount, Runtime };

Experiment experiment_from_string(std::string_view name);
std::string_view to_string(Experiment e);

/// Applies one grid value: GHz base speed, deadline seconds or vehicle count.
void apply_grid_value(SimConfig& cfg, Experiment e, double value);

struct SweepSpec {
  Experiment experiment = Experiment::CpuCapacity;
  std::vector<double> grid;
  std::vector<std::uint64_t> seeds;
  std::vector<Scheme> schemes;
};

struct SweepRow {
  double value = 0.0;
  Scheme scheme = Scheme::Exact;
  std::uint64_t seed = 0;
  RunReport report;
};

struct SweepSummary {
  double value = 0.0;
  Scheme scheme = Scheme::Exact;
  std::string metric;
  double mean = 0.0;
  double ci95_lo = 0.0;
  double ci95_hi = 0.0;
  int samples = 0;
};

struct SweepResult {
  Experiment experiment = Experiment::CpuCapacity;
  std::vector<SweepRow> rows;          // grid value, then scheme, then seed
  std::vector<SweepSummary> summary;   // grid value, then scheme, then metric
};

/// Names of the per-run metrics summarized by a sweep.
std::vector<std::string> sweep_metrics(Experiment e);
double metric_value(const RunReport& r, std::string_view metric, bool& defined);

/// Student-t 95% interval of the mean; a single sample gives a zero-width interval.
void confidence_interval(std::span<const double> samples, double& mean, double& lo, double& hi);

/// Runs every (grid value, seed, scheme) in parallel, capped by QCPTO_THREADS.
SweepResult sweep(const SweepSpec& spec, const SimConfig& base);

}  // namespace qcpto
