#include "qcpto/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "qcpto/errors.hpp"
#include "qcpto/latency.hpp"

namespace qcpto {
namespace {

// Sorting first makes the sum independent of input order.
double stable_mean(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

MetricSummary summarize(std::vector<double> values) {
  MetricSummary s;
  if (values.empty()) return s;
  s.epochs = static_cast<int>(values.size());
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  s.mean = stable_mean(std::move(values));
  return s;
}

}  // namespace

EpochReport epoch_metrics(const Assignment& assignment, const CoverageScene& scene,
                          std::span<const User> users, std::span<const Worker> workers,
                          const MetricsConfig& cfg) {
  const int n = assignment.num_users();
  if (static_cast<int>(users.size()) != n || scene.size() != n ||
      static_cast<int>(workers.size()) != assignment.num_workers()) {
    throw std::invalid_argument("epoch_metrics: sizes disagree");
  }
  EpochReport r;
  r.loads.assign(assignment.loads().begin(), assignment.loads().end());
  r.flagged_count = n;

  std::vector<double> awareness;
  std::vector<double> delays;
  int satisfied = 0;
  for (int i = 0; i < n; ++i) {
    UserRecord rec;
    rec.user_id = users[static_cast<std::size_t>(i)].id;
    rec.worker = assignment.worker_of(i);
    std::vector<int> team;
    if (rec.worker) {
      team = assignment.users_on(*rec.worker);
      const int eta = assignment.load(*rec.worker);
      rec.latency = response_latency(users[static_cast<std::size_t>(i)],
                                     workers[static_cast<std::size_t>(*rec.worker)], eta)
                        .total;
      delays.push_back(*rec.latency);
    }
    rec.awareness = scene.detected_awareness(i, team);
    rec.satisfied = rec.awareness >= cfg.phi;
    if (rec.satisfied) ++satisfied;
    if (!cfg.assigned_only || rec.worker) awareness.push_back(rec.awareness);
    r.users.push_back(rec);
  }

  r.awareness_count = static_cast<int>(awareness.size());
  r.mean_awareness = stable_mean(std::move(awareness));
  r.delay_count = static_cast<int>(delays.size());
  r.mean_delay = stable_mean(std::move(delays));
  r.used_workers = assignment.used_workers();
  if (r.used_workers > 0) {
    r.perception_intensity =
        static_cast<double>(assignment.assigned_count()) / static_cast<double>(r.used_workers);
  }
  if (n > 0) r.satisfaction = static_cast<double>(satisfied) / static_cast<double>(n);
  return r;
}

EpochReport epoch_metrics(const Assignment& assignment, std::span<const Roi> rois,
                          std::span<const Triangle> fovs, std::span<const User> users,
                          std::span<const Worker> workers, const GridSpec& grid,
                          const MetricsConfig& cfg) {
  return epoch_metrics(assignment, CoverageScene(grid, rois, fovs), users, workers, cfg);
}

RunReport run_aggregate(std::span<const EpochReport> epochs) {
  if (epochs.empty()) throw EmptyRun("no epochs to aggregate");
  std::vector<double> awareness, delay, intensity, satisfaction, objective, seconds;
  RunReport out;
  out.epochs = static_cast<int>(epochs.size());
  for (const EpochReport& e : epochs) {
    if (e.awareness_count > 0) awareness.push_back(e.mean_awareness);
    if (e.delay_count > 0) delay.push_back(e.mean_delay);
    if (e.used_workers > 0) intensity.push_back(e.perception_intensity);
    if (e.flagged_count > 0) {
      satisfaction.push_back(e.satisfaction);
      objective.push_back(e.objective);
      seconds.push_back(e.solve_seconds);
    }
    if (e.budget_exceeded) ++out.budget_exceeded_epochs;
  }
  out.awareness = summarize(std::move(awareness));
  out.delay = summarize(std::move(delay));
  out.intensity = summarize(std::move(intensity));
  out.satisfaction = summarize(std::move(satisfaction));
  out.objective = summarize(std::move(objective));
  out.solve_seconds = summarize(std::move(seconds));
  return out;
}

}  // namespace qcpto
