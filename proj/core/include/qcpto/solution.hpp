#pragma once

#include <cstdint>
#include <vector>

#include "qcpto/errors.hpp"
#include "qcpto/model.hpp"

namespace qcpto {

struct SolveStats {
  std::int64_t nodes = 0;       // search nodes (exact) or evaluated candidates (heuristic)
  std::int64_t iterations = 0;  // heuristic iterations
  double wall_seconds = 0.0;
  std::vector<double> best_history;  // heuristic best-so-far objective per iteration
};

struct Solution {
  Assignment assignment;
  double objective = 0.0;
  bool feasible = false;
  SolveStats stats;
};

/// Raised when the exact search runs out of nodes; carries the best solution found.
class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(Solution best)
      : Error("node budget exhausted before optimality was proven"), best_(std::move(best)) {}
  const Solution& best() const { return best_; }

 private:
  Solution best_;
};

}  // namespace qcpto
