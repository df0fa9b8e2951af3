#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qcpto {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Rotates p about pivot by angle (counter-clockwise).
inline Vec2 rotate_about(Vec2 p, Vec2 pivot, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Vec2 d = p - pivot;
  return {pivot.x + c * d.x - s * d.y, pivot.y + s * d.x + c * d.y};
}

/// Maps any angle into [0, 2π).
inline double normalize_heading(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, two_pi);
  if (a < 0.0) a += two_pi;
  if (a >= two_pi) a = 0.0;
  return a;
}

/// Maps any angle into (-π, π].
inline double wrap_angle(double angle) {
  constexpr double pi = std::numbers::pi;
  double a = std::remainder(angle, 2.0 * pi);
  if (a <= -pi) a += 2.0 * pi;
  return a;
}

/// Axis-aligned rectangle in meters.
struct Region {
  Vec2 min{0.0, 0.0};
  Vec2 max{200.0, 200.0};

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  Vec2 center() const { return {0.5 * (min.x + max.x), 0.5 * (min.y + max.y)}; }
  bool contains(Vec2 p, double margin = 0.0) const {
    return p.x >= min.x - margin && p.x <= max.x + margin && p.y >= min.y - margin &&
           p.y <= max.y + margin;
  }
};

/// Kinematic record of one vehicle in one time slot.
struct VehicleState {
  int user_id = 0;
  Vec2 position;
  double heading = 0.0;  // radians, [0, 2π)
  double speed = 0.0;    // m/s
  int slot = 0;

  friend bool operator==(const VehicleState&, const VehicleState&) = default;
};

/// Demand of one perception task.
struct TaskProfile {
  double workload_cycles = 2e8;   // l_i
  double frame_bits = 2e5;        // λ_i
  double deadline_s = 0.4;        // κ_i
};

struct User {
  int id = 0;
  TaskProfile task;
  std::vector<double> data_rate;  // bits/s, indexed by worker id (R_ij)
  double fov_range = 20.0;
  double fov_half_angle = std::numbers::pi / 4.0;
};

struct Worker {
  int id = 0;
  Vec2 position;
  double cpu_hz = 3e9;  // C_j
  double comm_range = 200.0;
};

enum class Turn { Straight, Left, Right };

std::string to_string(Turn turn);

/// Triangular region of interest; empty for Straight.
struct Roi {
  std::array<Vec2, 3> triangle{};
  Turn turn = Turn::Straight;

  bool empty() const { return turn == Turn::Straight; }
};

/// User → worker decision (x_ij). A user is on at most one worker by
/// construction; per-worker loads (η_j) are maintained incrementally.
class Assignment {
 public:
  Assignment() = default;
  Assignment(int num_users, int num_workers);

  int num_users() const { return static_cast<int>(worker_.size()); }
  int num_workers() const { return static_cast<int>(load_.size()); }

  std::optional<int> worker_of(int user) const;
  bool is_assigned(int user) const { return worker_[static_cast<std::size_t>(user)] >= 0; }

  /// Places user on worker, moving it off any previous worker.
  void assign(int user, int worker);
  void unassign(int user);
  void clear();

  int load(int worker) const { return load_[static_cast<std::size_t>(worker)]; }
  std::span<const int> loads() const { return load_; }
  int assigned_count() const { return assigned_; }
  int used_workers() const;
  std::vector<int> users_on(int worker) const;
  std::vector<int> assigned_users() const;

  /// Worker id per user, -1 for unassigned.
  std::span<const int> raw() const { return worker_; }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<int> worker_;
  std::vector<int> load_;
  int assigned_ = 0;
};

struct Violation {
  std::string entity;  // "user" or "worker"
  int id = 0;
  std::string field;
  std::string message;
};

/// Checks every entity invariant; returns the list of violations (empty when valid).
std::vector<Violation> validate_scenario(std::span<const User> users,
                                         std::span<const Worker> workers, const Region& region,
                                         double position_margin = 10.0);

}  // namespace qcpto
