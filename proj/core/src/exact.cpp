#include "qcpto/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>

namespace qcpto {
namespace {

using Vector = std::vector<int>;

std::size_t at(int i) { return static_cast<std::size_t>(i); }

// Workers are interchangeable when they share capacity and every user's limit.
// Returns, per worker, the lowest id of its class.
Vector worker_classes(const QmkpInstance& inst) {
  const int n = inst.num_users();
  const int m = inst.num_workers();
  Vector cls(at(m));
  for (int j = 0; j < m; ++j) {
    cls[at(j)] = j;
    for (int p = 0; p < j; ++p) {
      if (cls[at(p)] != p || inst.capacity[at(p)] != inst.capacity[at(j)]) continue;
      bool same = true;
      for (int i = 0; same && i < n; ++i) same = inst.limit(i, p) == inst.limit(i, j);
      if (same) {
        cls[at(j)] = p;
        break;
      }
    }
  }
  return cls;
}

// Relabels workers within each interchangeable class so that the groups are
// numbered in order of their smallest member; the result is the
// lexicographically smallest vector describing the same partition.
Vector canonical(const Vector& x, const Vector& cls) {
  const int m = static_cast<int>(cls.size());
  Vector relabel(at(m), -1);
  Vector next_free(at(m), 0);  // per class: how many class members handed out
  Vector out(x.size(), -1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int w = x[i];
    if (w < 0) continue;
    if (relabel[at(w)] < 0) {
      const int c = cls[at(w)];
      int seen = 0;
      for (int j = 0; j < m; ++j) {
        if (cls[at(j)] != c) continue;
        if (seen++ == next_free[at(c)]) {
          relabel[at(w)] = j;
          break;
        }
      }
      ++next_free[at(c)];
    }
    out[i] = relabel[at(w)];
  }
  return out;
}

class BranchAndBound {
 public:
  BranchAndBound(const QmkpInstance& inst, std::int64_t budget)
      : inst_(inst),
        n_(inst.num_users()),
        m_(inst.num_workers()),
        budget_(budget),
        classes_(worker_classes(inst)),
        current_(at(n_), -1),
        load_(at(m_), 0),
        limit_(inst.capacity),
        gain_(at(n_) * at(m_), 0.0),
        best_(at(n_), -1) {
    order_users();
    precompute_pair_bounds();
  }

  void seed(const Vector& incumbent, double value) {
    best_ = canonical(incumbent, classes_);
    best_value_ = value;
  }

  void run() { search(0); }

  bool exhausted() const { return exhausted_; }
  std::int64_t nodes() const { return nodes_; }
  const Vector& best() const { return best_; }

 private:
  double tolerance() const { return 1e-12 * std::max(1.0, std::abs(best_value_)); }

  // Users with the most pairwise value are decided first.
  void order_users() {
    order_.resize(at(n_));
    std::iota(order_.begin(), order_.end(), 0);
    std::vector<double> total(at(n_), 0.0);
    for (int i = 0; i < n_; ++i) total[at(i)] = inst_.quality.row_sum(i);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return total[at(a)] > total[at(b)]; });
  }

  // Optimistic value of pairs formed among the users decided at depth d or
  // later: each can share a worker with at most (largest capacity - 1) others,
  // and each pair is seen from both ends.
  void precompute_pair_bounds() {
    int max_cap = 0;
    for (int c : inst_.capacity) max_cap = std::max(max_cap, c);
    const std::size_t partners = at(std::max(max_cap - 1, 0));
    pair_bound_.assign(at(n_) + 1, 0.0);
    std::vector<double> row;
    for (int d = 0; d < n_; ++d) {
      double total = 0.0;
      for (int a = d; a < n_; ++a) {
        row.clear();
        for (int b = d; b < n_; ++b) {
          if (b != a) row.push_back(inst_.quality(order_[at(a)], order_[at(b)]));
        }
        const std::size_t k = std::min(partners, row.size());
        std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end(),
                          std::greater<>());
        for (std::size_t t = 0; t < k; ++t) total += row[t];
      }
      pair_bound_[at(d)] = 0.5 * total;
    }
  }

  bool admissible(int u, int j) const {
    if (!inst_.reachable(u, j)) return false;
    const int next = load_[at(j)] + 1;
    return next <= limit_[at(j)] && next <= inst_.limit(u, j);
  }

  double& gain(int u, int j) { return gain_[at(u) * at(m_) + at(j)]; }
  double gain(int u, int j) const { return gain_[at(u) * at(m_) + at(j)]; }

  double bound(int d) const {
    double b = value_ + pair_bound_[at(d)];
    for (int a = d; a < n_; ++a) {
      const int u = order_[at(a)];
      double best = 0.0;
      for (int j = 0; j < m_; ++j) {
        if (admissible(u, j)) best = std::max(best, gain(u, j));
      }
      b += best;
    }
    return b;
  }

  void apply(int d, int j) {
    const int u = order_[at(d)];
    current_[at(u)] = j;
    value_ += gain(u, j);
    for (int a = d + 1; a < n_; ++a) {
      const int k = order_[at(a)];
      gain(k, j) += inst_.quality(u, k);
    }
    int& load = load_[at(j)];
    ++load;
    if (load == 1) ++singletons_;
    if (load == 2) --singletons_;
    saved_limits_.push_back(limit_[at(j)]);
    limit_[at(j)] = std::min(limit_[at(j)], inst_.limit(u, j));
  }

  void undo(int d, int j) {
    const int u = order_[at(d)];
    limit_[at(j)] = saved_limits_.back();
    saved_limits_.pop_back();
    int& load = load_[at(j)];
    if (load == 2) ++singletons_;
    if (load == 1) --singletons_;
    --load;
    for (int a = d + 1; a < n_; ++a) {
      const int k = order_[at(a)];
      gain(k, j) -= inst_.quality(u, k);
    }
    value_ -= gain(u, j);
    current_[at(u)] = -1;
  }

  // The all-unassigned vector is feasible, so there is always an incumbent.
  void leaf() {
    if (singletons_ != 0) return;
    const double tol = tolerance();
    if (value_ < best_value_ - tol) return;
    Vector candidate = canonical(current_, classes_);
    if (value_ > best_value_ + tol || candidate < best_) {
      best_ = std::move(candidate);
      best_value_ = value_;
    }
  }

  void search(int d) {
    if (exhausted_) return;
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return;
    }
    if (d == n_) {
      leaf();
      return;
    }
    // Every worker holding a single user still needs one more.
    if (singletons_ > n_ - d) return;
    if (bound(d) < best_value_ - tolerance()) return;

    const int u = order_[at(d)];
    candidates_.resize(at(n_));
    Vector& options = candidates_[at(d)];
    options.clear();
    for (int j = 0; j < m_; ++j) {
      if (!admissible(u, j)) continue;
      if (load_[at(j)] == 0 && duplicate_empty_worker(j)) continue;
      options.push_back(j);
    }
    // Most promising worker first; stable so equal gains keep id order.
    std::stable_sort(options.begin(), options.end(),
                     [&](int a, int b) { return gain(u, a) > gain(u, b); });
    for (int j : options) {
      apply(d, j);
      search(d + 1);
      undo(d, j);
      if (exhausted_) return;
    }
    search(d + 1);
  }

  // Only the lowest-id empty worker of each interchangeable class is tried.
  bool duplicate_empty_worker(int j) const {
    const int cls = classes_[at(j)];
    for (int p = 0; p < j; ++p) {
      if (classes_[at(p)] == cls && load_[at(p)] == 0) return true;
    }
    return false;
  }

  const QmkpInstance& inst_;
  int n_;
  int m_;
  std::int64_t budget_;
  std::int64_t nodes_ = 0;
  bool exhausted_ = false;

  Vector classes_;
  Vector order_;
  Vector current_;  // indexed by user id
  Vector load_;
  Vector limit_;
  Vector saved_limits_;
  std::vector<double> gain_;  // per user and worker: Σ q with users already there
  std::vector<double> pair_bound_;
  std::vector<Vector> candidates_;
  int singletons_ = 0;
  double value_ = 0.0;

  Vector best_;
  double best_value_ = 0.0;
};

Assignment from_vector(const Vector& workers, int m) {
  Assignment a(static_cast<int>(workers.size()), m);
  for (std::size_t i = 0; i < workers.size(); ++i) {
    if (workers[i] >= 0) a.assign(static_cast<int>(i), workers[i]);
  }
  return a;
}

}  // namespace

Solution solve_exact(const QmkpInstance& inst, const ExactOptions& options) {
  if (options.node_budget <= 0) throw DomainError("node budget must be positive");
  inst.validate();
  const auto start = std::chrono::steady_clock::now();

  BranchAndBound bb(inst, options.node_budget);
  if (options.warm_start && check_feasible(*options.warm_start, inst).feasible) {
    const auto raw = options.warm_start->raw();
    bb.seed(Vector(raw.begin(), raw.end()), evaluate_objective(*options.warm_start, inst.quality));
  }
  bb.run();

  Solution sol;
  sol.assignment = from_vector(bb.best(), inst.num_workers());
  sol.objective = evaluate_objective(sol.assignment, inst.quality);
  sol.feasible = check_feasible(sol.assignment, inst).feasible;
  sol.stats.nodes = bb.nodes();
  sol.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (bb.exhausted()) throw BudgetExceeded(std::move(sol));
  return sol;
}

}  // namespace qcpto
