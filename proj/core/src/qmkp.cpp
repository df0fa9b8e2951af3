#include "qcpto/qmkp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "qcpto/errors.hpp"

namespace qcpto {
namespace {

int effective_limit(const Assignment& a, const QmkpInstance& inst, int j) {
  int lim = inst.capacity[static_cast<std::size_t>(j)];
  const auto raw = a.raw();
  for (int i = 0; i < a.num_users(); ++i) {
    if (raw[static_cast<std::size_t>(i)] == j) lim = std::min(lim, inst.limit(i, j));
  }
  return lim;
}

double co_assigned_sum(const Assignment& a, const QualityMatrix& q, int i) {
  const int w = a.raw()[static_cast<std::size_t>(i)];
  if (w < 0) return 0.0;
  double s = 0.0;
  for (int k = 0; k < a.num_users(); ++k) {
    if (k != i && a.raw()[static_cast<std::size_t>(k)] == w) s += q(i, k);
  }
  return s;
}

}  // namespace

QmkpInstance QmkpInstance::uniform(QualityMatrix quality, std::vector<int> capacity) {
  QmkpInstance inst;
  const std::size_t n = static_cast<std::size_t>(quality.size());
  const std::size_t m = capacity.size();
  inst.quality = std::move(quality);
  inst.capacity = std::move(capacity);
  inst.load_limit.resize(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) inst.load_limit[i * m + j] = inst.capacity[j];
  }
  inst.unit_compute.assign(n * m, 1.0);
  inst.transmit.assign(n * m, 0.0);
  return inst;
}

void QmkpInstance::validate() const {
  const int n = num_users();
  const std::size_t cells = static_cast<std::size_t>(n) * capacity.size();
  if (load_limit.size() != cells || unit_compute.size() != cells || transmit.size() != cells) {
    throw InvariantError("instance tables must be n x m");
  }
  for (int c : capacity) {
    if (c < 0) throw InvariantError("capacities must be >= 0");
  }
  for (int l : load_limit) {
    if (l < 0) throw InvariantError("load limits must be >= 0");
  }
  for (int i = 0; i < n; ++i) {
    if (quality(i, i) != 0.0) throw InvariantError("quality diagonal must be zero");
    for (int k = 0; k < n; ++k) {
      if (quality(i, k) != quality(k, i)) throw InvariantError("quality must be symmetric");
      if (!(quality(i, k) >= 0.0)) throw InvariantError("quality must be non-negative");
    }
  }
}

double evaluate_objective(const Assignment& a, const QualityMatrix& q) {
  const auto raw = a.raw();
  double total = 0.0;
  for (int i = 0; i < a.num_users(); ++i) {
    const int w = raw[static_cast<std::size_t>(i)];
    if (w < 0) continue;
    for (int k = i + 1; k < a.num_users(); ++k) {
      if (raw[static_cast<std::size_t>(k)] == w) total += q(i, k);
    }
  }
  return total;
}

Feasibility check_feasible(const Assignment& a, const QmkpInstance& inst) {
  Feasibility out;
  auto fail = [&](std::string msg) {
    out.feasible = false;
    out.violations.push_back(std::move(msg));
  };
  if (a.num_users() != inst.num_users() || a.num_workers() != inst.num_workers()) {
    fail("assignment dimensions do not match the instance");
    return out;
  }
  std::vector<int> recount(static_cast<std::size_t>(inst.num_workers()), 0);
  for (int i = 0; i < a.num_users(); ++i) {
    const int w = a.raw()[static_cast<std::size_t>(i)];
    if (w >= 0) ++recount[static_cast<std::size_t>(w)];
  }
  for (int j = 0; j < inst.num_workers(); ++j) {
    const int eta = a.load(j);
    const std::string tag = "worker " + std::to_string(j);
    if (eta != recount[static_cast<std::size_t>(j)]) fail(tag + ": load bookkeeping mismatch");
    if (eta == 1) fail(tag + ": hosts a single user (min-pair)");
    if (eta > inst.capacity[static_cast<std::size_t>(j)]) fail(tag + ": over capacity");
  }
  for (int i = 0; i < a.num_users(); ++i) {
    const int w = a.raw()[static_cast<std::size_t>(i)];
    if (w < 0) continue;
    if (inst.limit(i, w) == 0) {
      fail("user " + std::to_string(i) + ": worker " + std::to_string(w) + " unreachable");
    } else if (a.load(w) > inst.limit(i, w)) {
      fail("user " + std::to_string(i) + ": load on worker " + std::to_string(w) +
           " exceeds its limit");
    }
  }
  return out;
}

bool can_admit(const Assignment& a, const QmkpInstance& inst, int i, int j) {
  if (!inst.reachable(i, j)) return false;
  const int next = a.load(j) + 1;
  if (next > inst.limit(i, j)) return false;
  return next <= effective_limit(a, inst, j);
}

void repair_min_pair(Assignment& a) {
  for (int i = 0; i < a.num_users(); ++i) {
    const auto w = a.worker_of(i);
    if (w && a.load(*w) == 1) a.unassign(i);
  }
}

void repair_limits(Assignment& a, const QmkpInstance& inst) {
  for (int j = 0; j < inst.num_workers(); ++j) {
    while (a.load(j) > 0 && a.load(j) > effective_limit(a, inst, j)) {
      int victim = -1;
      double worst = std::numeric_limits<double>::infinity();
      for (int i : a.users_on(j)) {
        const double c = co_assigned_sum(a, inst.quality, i);
        if (c < worst) {
          worst = c;
          victim = i;
        }
      }
      a.unassign(victim);
    }
  }
  repair_min_pair(a);
}

std::string to_json(const QmkpInstance& inst) {
  const int n = inst.num_users();
  nlohmann::json j;
  j["n"] = n;
  j["m"] = inst.num_workers();
  std::vector<double> upper;
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) upper.push_back(inst.quality(i, k));
  }
  j["q"] = upper;
  j["capacities"] = inst.capacity;
  j["load_limit"] = inst.load_limit;
  j["unit_compute"] = inst.unit_compute;
  j["transmit"] = inst.transmit;
  return j.dump();
}

QmkpInstance instance_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, e.what());
  }
  try {
    const int n = j.at("n").get<int>();
    const int m = j.at("m").get<int>();
    if (n < 0 || m < 0) throw InvariantError("n and m must be >= 0");
    const auto upper = j.at("q").get<std::vector<double>>();
    if (upper.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(std::max(n - 1, 0)) / 2) {
      throw InvariantError("q must hold the n(n-1)/2 upper-triangle entries");
    }
    QualityMatrix q(n);
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
      for (int k = i + 1; k < n; ++k) q.set(i, k, upper[idx++]);
    }
    auto caps = j.at("capacities").get<std::vector<int>>();
    if (caps.size() != static_cast<std::size_t>(m)) throw InvariantError("need m capacities");
    QmkpInstance inst = QmkpInstance::uniform(std::move(q), std::move(caps));
    if (j.contains("load_limit")) inst.load_limit = j["load_limit"].get<std::vector<int>>();
    if (j.contains("unit_compute")) inst.unit_compute = j["unit_compute"].get<std::vector<double>>();
    if (j.contains("transmit")) inst.transmit = j["transmit"].get<std::vector<double>>();
    inst.validate();
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, e.what());
  }
}

}  // namespace qcpto
