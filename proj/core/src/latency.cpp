#include "qcpto/latency.hpp"

#include <cmath>
#include <limits>

#include "qcpto/errors.hpp"

namespace qcpto {

double compute_delay(double workload_cycles, double cpu_hz, int eta) {
  if (!(cpu_hz > 0.0)) throw DomainError("cpu capacity must be positive");
  if (eta < 1) throw DomainError("eta must be at least 1");
  return workload_cycles * static_cast<double>(eta) / cpu_hz;
}

double transmit_delay(double frame_bits, double rate_bps) {
  if (!(rate_bps > 0.0)) throw DomainError("data rate must be positive");
  return frame_bits / rate_bps;
}

LatencyBreakdown response_latency(const User& u, const Worker& w, int eta) {
  LatencyBreakdown out;
  out.compute = compute_delay(u.task.workload_cycles, w.cpu_hz, eta);
  out.transmit = transmit_delay(u.task.frame_bits, u.data_rate.at(static_cast<std::size_t>(w.id)));
  out.total = out.compute + out.transmit;
  return out;
}

int worker_capacity(double deadline_s, double cpu_hz, double mean_workload_cycles) {
  if (!(deadline_s > 0.0) || !(cpu_hz > 0.0) || !(mean_workload_cycles > 0.0)) {
    throw DomainError("worker_capacity inputs must be positive");
  }
  const double bound = deadline_s * cpu_hz / mean_workload_cycles;
  // Guard against products such as 0.4·2e9/2e8 landing just below an integer.
  const double rounded = std::round(bound);
  const double value = std::abs(bound - rounded) <= 1e-9 * rounded ? rounded : std::floor(bound);
  if (value >= static_cast<double>(std::numeric_limits<int>::max())) {
    return std::numeric_limits<int>::max();
  }
  return static_cast<int>(value);
}

int max_load_within_deadline(const User& u, const Worker& w) {
  const double transmit = transmit_delay(u.task.frame_bits, u.data_rate.at(static_cast<std::size_t>(w.id)));
  const double per_user = compute_delay(u.task.workload_cycles, w.cpu_hz, 1);
  const double slack = u.task.deadline_s - transmit;
  if (slack < per_user) return 0;
  if (per_user <= 0.0) return std::numeric_limits<int>::max();
  int eta = static_cast<int>(std::floor(slack / per_user));
  // floor can be off by one at exact boundaries; settle on the true latency check.
  while (eta > 0 && response_latency(u, w, eta).total > u.task.deadline_s) --eta;
  while (response_latency(u, w, eta + 1).total <= u.task.deadline_s) ++eta;
  return eta;
}

}  // namespace qcpto
