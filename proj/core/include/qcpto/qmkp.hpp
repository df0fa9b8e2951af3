#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qcpto/geometry.hpp"
#include "qcpto/model.hpp"

namespace qcpto {

/// Quadratic multiple knapsack instance with unit item weights.
///
/// Besides the per-worker count capacity, every (user, worker) pair carries a
/// load limit: the largest η_j at which the user may sit on that worker. A
/// limit of 0 marks the pair unreachable (out of range). With per-user
/// deadline checking enabled the limit also encodes t_ij(η_j) ≤ κ_i.
struct QmkpInstance {
  QualityMatrix quality;
  std::vector<int> capacity;
  std::vector<int> load_limit;       // n×m row-major
  std::vector<double> unit_compute;  // n×m, seconds per co-located user (l_i / C_j)
  std::vector<double> transmit;      // n×m, seconds (λ_i / R_ij)

  int num_users() const { return quality.size(); }
  int num_workers() const { return static_cast<int>(capacity.size()); }

  int limit(int i, int j) const { return load_limit[index(i, j)]; }
  bool reachable(int i, int j) const { return limit(i, j) > 0 && capacity[static_cast<std::size_t>(j)] > 0; }
  /// Response latency of user i on worker j when eta users share it.
  double latency(int i, int j, int eta) const {
    return unit_compute[index(i, j)] * eta + transmit[index(i, j)];
  }

  /// Instance with every pair reachable, limits equal to capacities and
  /// latency t_ij(η) = η.
  static QmkpInstance uniform(QualityMatrix quality, std::vector<int> capacity);

  /// Throws InvariantError when dimensions, symmetry or signs are off.
  void validate() const;

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * capacity.size() + static_cast<std::size_t>(j);
  }
};

/// Σ_j Σ_{i<k on j} q_ik, summed in user-id order so relabeling workers does
/// not change the rounding.
double evaluate_objective(const Assignment& a, const QualityMatrix& q);

struct Feasibility {
  bool feasible = true;
  std::vector<std::string> violations;
};

/// Min-pair, capacity, reachability/limit and uniqueness checks.
Feasibility check_feasible(const Assignment& a, const QmkpInstance& inst);

/// True when user i can join worker j on top of assignment a.
bool can_admit(const Assignment& a, const QmkpInstance& inst, int i, int j);

/// Unassigns every user that is alone on its worker.
void repair_min_pair(Assignment& a);

/// Evicts the lowest-contribution user (ties: lowest id) from any worker whose
/// load exceeds its capacity or a member's limit, then applies repair_min_pair.
void repair_limits(Assignment& a, const QmkpInstance& inst);

std::string to_json(const QmkpInstance& inst);
QmkpInstance instance_from_json(std::string_view text);

}  // namespace qcpto
