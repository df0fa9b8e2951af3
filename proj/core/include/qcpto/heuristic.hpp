#pragma once

#include <cstdint>
#include <span>

#include "qcpto/qmkp.hpp"
#include "qcpto/rng.hpp"
#include "qcpto/solution.hpp"

namespace qcpto {

struct HeurConfig {
  double alpha = 0.3;  // share of assigned users dropped per perturbation
  int max_iters = 500;
  int patience = 100;  // iterations without improvement before stopping
  std::uint64_t seed = 1;
  bool regen_alpha_each_iter = false;
  std::size_t memory_capacity = 100'000;  // remembered fingerprints, FIFO eviction

  /// Throws ConfigError naming the offending key. max_iters = 0 is allowed and
  /// yields the repaired greedy construction.
  void validate() const;
};

/// Pairwise value user i receives in s. For an empty s this is the full
/// potential Σ_k q_ik, so the initial ordering is not vacuous.
double contribution(int i, const Assignment& s, const QualityMatrix& q);

/// contribution / t_ij, with t_ij taken at the worker's load after admission.
double density(int i, const Assignment& s, int worker, const QmkpInstance& inst);

/// Packs free users on top of fixed_part. Workers are ranked once by residual
/// capacity (descending, ties by id) and filled in that order; each worker
/// repeatedly takes the admissible free user of highest density, where density
/// counts the value shared with users already on that worker (or the user's
/// potential over the free pool when the worker is empty). A worker stops
/// filling when no candidate adds value. barred[i], when given, names a
/// worker user i may not join (-1 for none).
Assignment greedy_bin_packing(std::span<const int> free_users, const QmkpInstance& inst,
                              const Assignment& fixed_part, std::span<const int> barred = {});

/// Drops max(1, ⌈α·k⌉) of the k assigned users uniformly at random and
/// repacks every free user with greedy_bin_packing. With bar_return the
/// dropped users may not rejoin the worker they left, which forces a
/// different configuration.
Assignment fix_and_complete(const Assignment& s, double alpha, const QmkpInstance& inst, Rng& rng,
                            bool bar_return = false);

/// Greedy construction followed by the fix-and-complete loop; the result goes
/// through limit and min-pair repair. Deterministic for a fixed seed.
Solution solve_heuristic(const QmkpInstance& inst, const HeurConfig& cfg = {});

}  // namespace qcpto
