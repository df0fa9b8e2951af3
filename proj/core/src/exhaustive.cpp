#include <chrono>
#include <cmath>

#include "qcpto/exact.hpp"

namespace qcpto {
namespace {

bool admissible_point(const std::vector<int>& x, const QmkpInstance& inst, std::vector<int>& count) {
  const int m = inst.num_workers();
  std::fill(count.begin(), count.end(), 0);
  for (int w : x) {
    if (w >= 0) ++count[static_cast<std::size_t>(w)];
  }
  for (int j = 0; j < m; ++j) {
    const int c = count[static_cast<std::size_t>(j)];
    if (c == 1 || c > inst.capacity[static_cast<std::size_t>(j)]) return false;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int w = x[i];
    if (w < 0) continue;
    if (count[static_cast<std::size_t>(w)] > inst.limit(static_cast<int>(i), w)) return false;
  }
  return true;
}

double point_value(const std::vector<int>& x, const QualityMatrix& q) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0) continue;
    for (std::size_t k = i + 1; k < x.size(); ++k) {
      if (x[k] == x[i]) total += q(static_cast<int>(i), static_cast<int>(k));
    }
  }
  return total;
}

}  // namespace

Solution solve_exhaustive(const QmkpInstance& inst, std::uint64_t max_points) {
  inst.validate();
  const int n = inst.num_users();
  const int m = inst.num_workers();
  const double space = std::pow(static_cast<double>(m + 1), n);
  if (space > static_cast<double>(max_points)) {
    throw DomainError("exhaustive search space of " + std::to_string(space) + " points is too large");
  }
  const auto start = std::chrono::steady_clock::now();

  std::vector<int> x(static_cast<std::size_t>(n), -1);
  std::vector<int> count(static_cast<std::size_t>(m), 0);
  std::vector<int> best = x;
  double best_value = 0.0;
  std::int64_t points = 0;

  // Odometer over {-1, 0, .., m-1}^n, last user varying fastest.
  while (true) {
    ++points;
    if (admissible_point(x, inst, count)) {
      const double v = point_value(x, inst.quality);
      if (v > best_value + 1e-12 * std::max(1.0, std::abs(best_value))) {
        best_value = v;
        best = x;
      }
    }
    int pos = n - 1;
    while (pos >= 0) {
      int& digit = x[static_cast<std::size_t>(pos)];
      if (++digit < m) break;
      digit = -1;
      --pos;
    }
    if (pos < 0) break;
  }

  Solution sol;
  sol.assignment = Assignment(n, m);
  for (int i = 0; i < n; ++i) {
    if (best[static_cast<std::size_t>(i)] >= 0) sol.assignment.assign(i, best[static_cast<std::size_t>(i)]);
  }
  sol.objective = evaluate_objective(sol.assignment, inst.quality);
  sol.feasible = check_feasible(sol.assignment, inst).feasible;
  sol.stats.nodes = points;
  sol.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

}  // namespace qcpto
