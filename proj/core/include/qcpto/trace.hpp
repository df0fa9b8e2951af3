#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qcpto/model.hpp"

namespace qcpto {

struct SlotRecord {
  int slot = 0;
  std::vector<VehicleState> vehicles;

  friend bool operator==(const SlotRecord&, const SlotRecord&) = default;
};

/// Ordered per-slot vehicle states. Slot indices increase by exactly one.
struct Trace {
  double delta = 1.0;  // slot duration, seconds
  std::vector<SlotRecord> slots;

  bool empty() const { return slots.empty(); }
  const SlotRecord* find_slot(int slot) const;

  friend bool operator==(const Trace&, const Trace&) = default;
};

/// Synthetic four-way intersection scenario.
struct ScenarioConfig {
  Region region;
  int lanes_per_direction = 2;
  double lane_width = 3.5;
  double max_speed = 40.0 / 3.6;     // m/s
  double min_speed_fraction = 0.7;   // speeds drawn in [fraction·max, max]
  double duration = 60.0;            // seconds
  double delta = 1.0;                // slot length, seconds
  int num_vehicles = 40;
  double p_left = 1.0 / 3.0;
  double p_right = 1.0 / 3.0;        // straight takes the remainder
  double turn_radius = 8.0;
  double spawn_window = 30.0;        // latest spawn time, seconds
  std::vector<Turn> intents;         // optional per-vehicle override, cycled
};

/// Parses the `slot,user_id,x_m,y_m,heading_rad,speed_mps` CSV format.
Trace parse_trace(std::istream& in, double delta);
Trace load_trace(const std::filesystem::path& path, double delta);

void write_trace(std::ostream& out, const Trace& trace);
/// Debug helper; load_trace(save_trace(t)) reproduces t exactly.
void save_trace(const Trace& trace, const std::filesystem::path& path);

/// Returns human-readable invariant violations (empty when the trace is consistent).
std::vector<std::string> check_trace(const Trace& trace, double max_speed);

Trace synth_intersection(const ScenarioConfig& cfg, std::uint64_t seed);

}  // namespace qcpto
