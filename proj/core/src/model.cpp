#include "qcpto/model.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace qcpto {

std::string to_string(Turn turn) {
  switch (turn) {
    case Turn::Left:
      return "left";
    case Turn::Right:
      return "right";
    case Turn::Straight:
      break;
  }
  return "straight";
}

Assignment::Assignment(int num_users, int num_workers)
    : worker_(static_cast<std::size_t>(num_users), -1),
      load_(static_cast<std::size_t>(num_workers), 0) {}

std::optional<int> Assignment::worker_of(int user) const {
  const int w = worker_.at(static_cast<std::size_t>(user));
  if (w < 0) return std::nullopt;
  return w;
}

void Assignment::assign(int user, int worker) {
  if (worker < 0 || worker >= num_workers()) throw std::out_of_range("worker id");
  int& slot = worker_.at(static_cast<std::size_t>(user));
  if (slot == worker) return;
  if (slot >= 0) {
    --load_[static_cast<std::size_t>(slot)];
  } else {
    ++assigned_;
  }
  slot = worker;
  ++load_[static_cast<std::size_t>(worker)];
}

void Assignment::unassign(int user) {
  int& slot = worker_.at(static_cast<std::size_t>(user));
  if (slot < 0) return;
  --load_[static_cast<std::size_t>(slot)];
  --assigned_;
  slot = -1;
}

void Assignment::clear() {
  std::fill(worker_.begin(), worker_.end(), -1);
  std::fill(load_.begin(), load_.end(), 0);
  assigned_ = 0;
}

int Assignment::used_workers() const {
  int used = 0;
  for (int l : load_) used += l > 0 ? 1 : 0;
  return used;
}

std::vector<int> Assignment::users_on(int worker) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < worker_.size(); ++i) {
    if (worker_[i] == worker) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> Assignment::assigned_users() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < worker_.size(); ++i) {
    if (worker_[i] >= 0) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<Violation> validate_scenario(std::span<const User> users,
                                         std::span<const Worker> workers, const Region& region,
                                         double position_margin) {
  std::vector<Violation> out;
  auto flag = [&](const char* entity, int id, const char* field, const char* msg) {
    out.push_back({entity, id, field, msg});
  };

  for (std::size_t i = 0; i < users.size(); ++i) {
    const User& u = users[i];
    if (u.id != static_cast<int>(i)) flag("user", u.id, "id", "ids must be dense 0..n-1");
    if (!(u.task.workload_cycles > 0.0)) flag("user", u.id, "workload_l", "must be > 0");
    if (!(u.task.frame_bits > 0.0)) flag("user", u.id, "frame_size_lambda", "must be > 0");
    if (!(u.task.deadline_s > 0.0)) flag("user", u.id, "deadline_kappa", "must be > 0");
    if (!(u.fov_range > 0.0)) flag("user", u.id, "fov_range", "must be > 0");
    if (!(u.fov_half_angle > 0.0 && u.fov_half_angle < std::numbers::pi / 2.0)) {
      flag("user", u.id, "fov_half_angle", "must lie in (0, pi/2)");
    }
    if (u.data_rate.size() != workers.size()) {
      flag("user", u.id, "data_rate", "needs one rate per worker");
    }
    for (double r : u.data_rate) {
      if (!(r > 0.0)) {
        flag("user", u.id, "data_rate", "rates must be > 0");
        break;
      }
    }
  }

  for (std::size_t j = 0; j < workers.size(); ++j) {
    const Worker& w = workers[j];
    if (w.id != static_cast<int>(j)) flag("worker", w.id, "id", "ids must be dense 0..m-1");
    if (!(w.cpu_hz > 0.0)) flag("worker", w.id, "cpu_capacity", "must be > 0");
    if (!(w.comm_range > 0.0)) flag("worker", w.id, "comm_range", "must be > 0");
    if (!region.contains(w.position, position_margin)) {
      flag("worker", w.id, "position", "outside region bounds plus margin");
    }
  }
  return out;
}

}  // namespace qcpto
