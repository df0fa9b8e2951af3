#include "qcpto/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "qcpto/errors.hpp"

namespace qcpto {

GoOrder go_order_from_string(std::string_view name) {
  if (name == "nearest") return GoOrder::Nearest;
  if (name == "fill") return GoOrder::Fill;
  throw ConfigError("solver.go_order", "unknown order '" + std::string(name) + "'");
}

std::string_view to_string(GoOrder order) { return order == GoOrder::Fill ? "fill" : "nearest"; }

Assignment solve_go(const QmkpInstance& inst, std::span<const Vec2> user_positions,
                    std::span<const Worker> workers, GoOrder order) {
  const int n = inst.num_users();
  const int m = inst.num_workers();
  if (static_cast<int>(workers.size()) != m) throw std::invalid_argument("one Worker per instance worker");
  if (order == GoOrder::Nearest && static_cast<int>(user_positions.size()) != n) {
    throw std::invalid_argument("one position per user");
  }

  Assignment a(n, m);
  std::vector<int> ranked(static_cast<std::size_t>(m));
  std::iota(ranked.begin(), ranked.end(), 0);
  if (order == GoOrder::Fill) {
    std::stable_sort(ranked.begin(), ranked.end(), [&](int x, int y) {
      return inst.capacity[static_cast<std::size_t>(x)] > inst.capacity[static_cast<std::size_t>(y)];
    });
  }
  for (int i = 0; i < n; ++i) {
    if (order == GoOrder::Nearest) {
      const Vec2 p = user_positions[static_cast<std::size_t>(i)];
      std::stable_sort(ranked.begin(), ranked.end(), [&](int x, int y) {
        return norm(workers[static_cast<std::size_t>(x)].position - p) <
               norm(workers[static_cast<std::size_t>(y)].position - p);
      });
    }
    for (int j : ranked) {
      if (can_admit(a, inst, i, j)) {
        a.assign(i, j);
        break;
      }
    }
    if (order == GoOrder::Nearest) std::sort(ranked.begin(), ranked.end());
  }
  return a;
}

Assignment solve_cpto(const QmkpInstance& inst) {
  const int n = inst.num_users();
  const int m = inst.num_workers();
  Assignment a(n, m);
  for (int i = 0; i < n; ++i) {
    int pick = -1;
    for (int j = 0; j < m; ++j) {
      if (!can_admit(a, inst, i, j)) continue;
      if (pick < 0 || a.load(j) < a.load(pick)) pick = j;
    }
    if (pick >= 0) a.assign(i, pick);
  }
  return a;
}

}  // namespace qcpto
