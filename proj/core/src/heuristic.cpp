#include "qcpto/heuristic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <numeric>
#include <unordered_set>

#include "qcpto/errors.hpp"

namespace qcpto {
namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

int residual(const Assignment& a, const QmkpInstance& inst, int j) {
  int lim = inst.capacity[at(j)];
  for (int i : a.users_on(j)) lim = std::min(lim, inst.limit(i, j));
  return std::max(0, lim - a.load(j));
}

double tolerance(double ref) { return 1e-12 * std::max(1.0, std::abs(ref)); }

std::uint64_t fingerprint(const Assignment& a) {
  std::uint64_t h = 0x51ed27f3a9c4b8d1ULL;
  for (int w : a.raw()) h = mix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(w) + 2));
  return h;
}

// Bounded memory of visited configurations.
class VisitedSet {
 public:
  explicit VisitedSet(std::size_t capacity) : capacity_(capacity) {}

  // Returns false when the fingerprint was already present.
  bool insert(std::uint64_t key) {
    if (capacity_ == 0) return true;
    if (!seen_.insert(key).second) return false;
    order_.push_back(key);
    if (order_.size() > capacity_) {
      seen_.erase(order_.front());
      order_.pop_front();
    }
    return true;
  }

 private:
  std::size_t capacity_;
  std::unordered_set<std::uint64_t> seen_;
  std::deque<std::uint64_t> order_;
};

}  // namespace

void HeurConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("solver.alpha", "must lie in (0, 1)");
  if (max_iters < 0) throw ConfigError("solver.max_iters", "must be >= 0");
  if (patience < 1) throw ConfigError("solver.patience", "must be >= 1");
}

double contribution(int i, const Assignment& s, const QualityMatrix& q) {
  if (s.assigned_count() == 0) return q.row_sum(i);
  const auto w = s.worker_of(i);
  if (!w) return 0.0;
  double total = 0.0;
  for (int k : s.users_on(*w)) {
    if (k != i) total += q(i, k);
  }
  return total;
}

double density(int i, const Assignment& s, int worker, const QmkpInstance& inst) {
  const double t = inst.latency(i, worker, s.load(worker) + 1);
  if (!(t > 0.0)) throw DomainError("density needs a positive latency");
  return contribution(i, s, inst.quality) / t;
}

Assignment greedy_bin_packing(std::span<const int> free_users, const QmkpInstance& inst,
                              const Assignment& fixed_part, std::span<const int> barred) {
  Assignment out = fixed_part;
  const int m = inst.num_workers();

  std::vector<int> workers(at(m));
  std::iota(workers.begin(), workers.end(), 0);
  std::vector<int> room(at(m));
  for (int j = 0; j < m; ++j) room[at(j)] = residual(out, inst, j);
  std::stable_sort(workers.begin(), workers.end(),
                   [&](int a, int b) { return room[at(a)] > room[at(b)]; });

  std::vector<int> pool;
  for (int i : free_users) {
    if (!out.is_assigned(i)) pool.push_back(i);
  }
  std::sort(pool.begin(), pool.end());

  std::vector<double> shared(at(inst.num_users()));
  for (int rho : workers) {
    if (pool.empty()) break;
    // Value each free user would share with the users already on rho.
    const auto members = out.users_on(rho);
    for (int i : pool) {
      double s = 0.0;
      if (members.empty()) {
        for (int k : pool) s += inst.quality(i, k);
      } else {
        for (int k : members) s += inst.quality(i, k);
      }
      shared[at(i)] = s;
    }
    bool bootstrap = members.empty();

    while (!pool.empty()) {
      int pick = -1;
      double best = 0.0;
      for (int i : pool) {
        if (!barred.empty() && barred[at(i)] == rho) continue;
        if (!can_admit(out, inst, i, rho)) continue;
        const double t = inst.latency(i, rho, out.load(rho) + 1);
        if (!(t > 0.0)) throw DomainError("density needs a positive latency");
        const double d = shared[at(i)] / t;
        if (d > best) {
          best = d;
          pick = i;
        }
      }
      if (pick < 0) break;
      out.assign(pick, rho);
      pool.erase(std::find(pool.begin(), pool.end(), pick));
      if (bootstrap) {
        for (int i : pool) shared[at(i)] = inst.quality(i, pick);
        bootstrap = false;
      } else {
        for (int i : pool) shared[at(i)] += inst.quality(i, pick);
      }
    }
  }
  return out;
}

Assignment fix_and_complete(const Assignment& s, double alpha, const QmkpInstance& inst, Rng& rng,
                            bool bar_return) {
  Assignment fixed = s;
  std::vector<int> barred;
  if (bar_return) barred.assign(at(inst.num_users()), -1);
  std::vector<int> assigned = s.assigned_users();
  const std::size_t k = assigned.size();
  if (k > 0) {
    const auto want = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(k) - 1e-12));
    const std::size_t drop = std::min(k, std::max<std::size_t>(1, want));
    for (std::size_t t = 0; t < drop; ++t) {
      const std::size_t pick = t + static_cast<std::size_t>(rng.below(k - t));
      std::swap(assigned[t], assigned[pick]);
      if (bar_return) barred[at(assigned[t])] = *s.worker_of(assigned[t]);
      fixed.unassign(assigned[t]);
    }
  }
  std::vector<int> free_users;
  for (int i = 0; i < inst.num_users(); ++i) {
    if (!fixed.is_assigned(i)) free_users.push_back(i);
  }
  return greedy_bin_packing(free_users, inst, fixed, barred);
}

Solution solve_heuristic(const QmkpInstance& inst, const HeurConfig& cfg) {
  cfg.validate();
  inst.validate();
  const auto start = std::chrono::steady_clock::now();
  Rng rng(cfg.seed);

  std::vector<int> everyone(at(inst.num_users()));
  std::iota(everyone.begin(), everyone.end(), 0);
  Assignment current =
      greedy_bin_packing(everyone, inst, Assignment(inst.num_users(), inst.num_workers()));
  Assignment best = current;
  double best_value = evaluate_objective(best, inst.quality);

  VisitedSet memory(cfg.memory_capacity);
  memory.insert(fingerprint(current));

  Solution sol;
  double alpha = cfg.alpha;
  int stale = 0;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    if (cfg.regen_alpha_each_iter) alpha = static_cast<double>(rng.below(999) + 1) / 1000.0;
    Assignment candidate = fix_and_complete(current, alpha, inst, rng);
    bool fresh = memory.insert(fingerprint(candidate));
    if (!fresh) {
      // Seen before: perturb again, keeping dropped users off their old workers.
      candidate = fix_and_complete(current, alpha, inst, rng, true);
      fresh = memory.insert(fingerprint(candidate));
    }
    bool improved = false;
    if (fresh) {
      ++sol.stats.nodes;
      const double value = evaluate_objective(candidate, inst.quality);
      if (value > best_value + tolerance(best_value)) {
        best = candidate;
        best_value = value;
        improved = true;
      }
    }
    current = std::move(candidate);
    if (rng.coin()) current = best;

    ++sol.stats.iterations;
    sol.stats.best_history.push_back(best_value);
    stale = improved ? 0 : stale + 1;
    if (stale >= cfg.patience) break;
  }

  repair_limits(best, inst);
  sol.assignment = std::move(best);
  sol.objective = evaluate_objective(sol.assignment, inst.quality);
  sol.feasible = check_feasible(sol.assignment, inst).feasible;
  sol.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

}  // namespace qcpto
