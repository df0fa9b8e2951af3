#pragma once

#include <cstdint>
#include <optional>

#include "qcpto/qmkp.hpp"
#include "qcpto/solution.hpp"

namespace qcpto {

struct ExactOptions {
  std::int64_t node_budget = 20'000'000;
  /// Feasible starting incumbent; tightens pruning from the first node.
  std::optional<Assignment> warm_start;
};

/// Branch-and-bound deciding users in decreasing order of total pairwise
/// quality, with interchangeable workers collapsed. Returns an optimal assignment;
/// among optimal assignments the lexicographically smallest worker vector
/// (unassigned = -1) wins. Throws BudgetExceeded when the node budget runs out.
Solution solve_exact(const QmkpInstance& inst, const ExactOptions& options = {});

/// Exhaustive enumeration of all (m+1)^n assignment vectors in lexicographic
/// order. Shares no search code with solve_exact. Throws DomainError when the
/// space exceeds max_points.
Solution solve_exhaustive(const QmkpInstance& inst, std::uint64_t max_points = 50'000'000);

}  // namespace qcpto
