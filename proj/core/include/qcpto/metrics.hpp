#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qcpto/geometry.hpp"
#include "qcpto/model.hpp"
#include "qcpto/qmkp.hpp"

namespace qcpto {

struct MetricsConfig {
  double phi = 0.35;           // satisfaction threshold on detected awareness
  bool assigned_only = false;  // average awareness over served users only
};

struct UserRecord {
  int user_id = 0;
  double awareness = 0.0;
  std::optional<int> worker;
  std::optional<double> latency;  // seconds; empty when the user is not served
  bool satisfied = false;
};

/// Metrics of one decision epoch. An aggregate whose population is empty is
/// reported as 0 and its count as 0; run_aggregate skips such epochs.
struct EpochReport {
  int slot = 0;
  std::vector<UserRecord> users;
  std::vector<int> loads;  // η_j per worker
  double objective = 0.0;
  bool budget_exceeded = false;
  double solve_seconds = 0.0;

  double mean_awareness = 0.0;
  double mean_delay = 0.0;
  double perception_intensity = 0.0;
  double satisfaction = 0.0;
  int awareness_count = 0;
  int delay_count = 0;
  int used_workers = 0;
  int flagged_count = 0;
};

/// Per-user awareness, latency and satisfaction plus epoch aggregates.
/// users[i] and the scene's user i describe the same vehicle; the scene must
/// have a non-empty ROI for every user.
EpochReport epoch_metrics(const Assignment& assignment, const CoverageScene& scene,
                          std::span<const User> users, std::span<const Worker> workers,
                          const MetricsConfig& cfg = {});

EpochReport epoch_metrics(const Assignment& assignment, std::span<const Roi> rois,
                          std::span<const Triangle> fovs, std::span<const User> users,
                          std::span<const Worker> workers, const GridSpec& grid,
                          const MetricsConfig& cfg = {});

struct MetricSummary {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  int epochs = 0;  // epochs in which the metric was defined
};

struct RunReport {
  MetricSummary awareness;
  MetricSummary delay;
  MetricSummary intensity;
  MetricSummary satisfaction;
  MetricSummary objective;
  MetricSummary solve_seconds;
  int epochs = 0;
  int budget_exceeded_epochs = 0;
};

/// Unweighted means over epochs (order independent). Throws EmptyRun.
RunReport run_aggregate(std::span<const EpochReport> epochs);

}  // namespace qcpto
