#pragma once

#include "qcpto/model.hpp"

namespace qcpto {

struct LatencyBreakdown {
  double compute = 0.0;   // α_ij
  double transmit = 0.0;  // γ_ij
  double total = 0.0;     // t_ij
};

/// Execution time when the worker's CPU is shared equally by eta users.
double compute_delay(double workload_cycles, double cpu_hz, int eta);

/// Upload time of one perception frame. Result return and propagation are negligible.
double transmit_delay(double frame_bits, double rate_bps);

LatencyBreakdown response_latency(const User& u, const Worker& w, int eta);

/// Number of users a worker can host within the deadline: floor(κ·C / l̄).
int worker_capacity(double deadline_s, double cpu_hz, double mean_workload_cycles);

/// Largest η for which the user's response latency on this worker stays
/// within its deadline; 0 when even η = 1 misses it.
int max_load_within_deadline(const User& u, const Worker& w);

}  // namespace qcpto
