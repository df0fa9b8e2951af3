#pragma once

#include <span>
#include <string_view>

#include "qcpto/model.hpp"
#include "qcpto/qmkp.hpp"

namespace qcpto {

/// Worker preference of the greedy offloading baseline.
enum class GoOrder {
  Nearest,  // closest reachable worker first (ties: lowest id)
  Fill,     // largest capacity first, filled before the next is opened
};

GoOrder go_order_from_string(std::string_view name);
std::string_view to_string(GoOrder order);

/// Greedy offloading: users in id order go to the first worker in the
/// preference order that can still admit them. Quality is ignored.
Assignment solve_go(const QmkpInstance& inst, std::span<const Vec2> user_positions,
                    std::span<const Worker> workers, GoOrder order = GoOrder::Fill);

/// Count-maximizing uniform offloading: each user in id order joins the
/// admissible worker with the lowest current load (ties: lowest id).
Assignment solve_cpto(const QmkpInstance& inst);

}  // namespace qcpto
