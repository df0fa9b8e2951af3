#include "qcpto/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string_view>

#include "qcpto/errors.hpp"
#include "qcpto/rng.hpp"

namespace qcpto {
namespace {

constexpr std::string_view kHeader = "slot,user_id,x_m,y_m,heading_rad,speed_mps";

template <typename T>
T parse_field(std::string_view text, std::size_t line, const char* name) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(line, std::string("bad ") + name + " '" + std::string(text) + "'");
  }
  return value;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Path of one vehicle in a local frame where it enters from the south heading
// north, with the intersection centered at the origin.
class LanePath {
 public:
  LanePath(double half, double offset, double radius, Turn turn)
      : half_(half), offset_(offset), radius_(radius), turn_(turn) {
    switch (turn_) {
      case Turn::Right:
        arc_start_ = -offset_ - radius_;
        exit_len_ = half_ - offset_ - radius_;
        break;
      case Turn::Left:
        arc_start_ = offset_ - radius_;
        exit_len_ = half_ + offset_ - radius_;
        break;
      case Turn::Straight:
        arc_start_ = half_;
        exit_len_ = 0.0;
        break;
    }
    approach_len_ = arc_start_ + half_;
    arc_len_ = turn_ == Turn::Straight ? 0.0 : radius_ * std::numbers::pi / 2.0;
  }

  double length() const { return approach_len_ + arc_len_ + exit_len_; }

  // Position and heading at arc length s from the entry point.
  std::pair<Vec2, double> sample(double s) const {
    constexpr double north = std::numbers::pi / 2.0;
    if (s <= approach_len_) return {{offset_, -half_ + s}, north};
    const double sign = turn_ == Turn::Right ? 1.0 : -1.0;
    const Vec2 center{offset_ + sign * radius_, arc_start_};
    if (s <= approach_len_ + arc_len_) {
      const double a = (s - approach_len_) / radius_;
      return {{center.x - sign * radius_ * std::cos(a), arc_start_ + radius_ * std::sin(a)},
              north - sign * a};
    }
    const double d = s - approach_len_ - arc_len_;
    return {{center.x + sign * d, arc_start_ + radius_}, north - sign * north};
  }

 private:
  double half_;
  double offset_;
  double radius_;
  Turn turn_;
  double arc_start_ = 0.0;
  double approach_len_ = 0.0;
  double arc_len_ = 0.0;
  double exit_len_ = 0.0;
};

}  // namespace

const SlotRecord* Trace::find_slot(int slot) const {
  if (slots.empty()) return nullptr;
  const long idx = static_cast<long>(slot) - slots.front().slot;
  if (idx < 0 || idx >= static_cast<long>(slots.size())) return nullptr;
  return &slots[static_cast<std::size_t>(idx)];
}

Trace parse_trace(std::istream& in, double delta) {
  Trace trace;
  trace.delta = delta;
  std::string raw;
  std::size_t line = 0;
  std::set<std::pair<int, int>> seen;

  while (std::getline(in, raw)) {
    ++line;
    std::string_view text(raw);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (line == 1) {
      if (text != kHeader) throw ParseError(line, "expected header '" + std::string(kHeader) + "'");
      continue;
    }
    if (text.empty()) continue;

    std::array<std::string_view, 6> fields;
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = text.find(',', start);
      if (count == fields.size()) throw ParseError(line, "too many fields");
      fields[count++] = text.substr(start, comma == std::string_view::npos ? comma : comma - start);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (count != fields.size()) throw ParseError(line, "expected 6 fields");

    VehicleState v;
    v.slot = parse_field<int>(fields[0], line, "slot");
    v.user_id = parse_field<int>(fields[1], line, "user_id");
    v.position.x = parse_field<double>(fields[2], line, "x_m");
    v.position.y = parse_field<double>(fields[3], line, "y_m");
    const double heading = parse_field<double>(fields[4], line, "heading_rad");
    v.speed = parse_field<double>(fields[5], line, "speed_mps");
    if (!std::isfinite(v.position.x) || !std::isfinite(v.position.y) || !std::isfinite(heading)) {
      throw ParseError(line, "non-finite value");
    }
    if (!(v.speed >= 0.0)) throw ParseError(line, "speed must be >= 0");
    if (v.user_id < 0) throw ParseError(line, "user_id must be >= 0");
    v.heading = normalize_heading(heading);

    if (!seen.emplace(v.slot, v.user_id).second) {
      throw ParseError(line, "duplicate (slot, user) row");
    }
    if (!trace.slots.empty()) {
      const int last = trace.slots.back().slot;
      if (v.slot < last) {
        throw InvariantError("line " + std::to_string(line) + ": slot " + std::to_string(v.slot) +
                             " after slot " + std::to_string(last));
      }
      for (int s = last + 1; s <= v.slot; ++s) trace.slots.push_back({s, {}});
    } else {
      trace.slots.push_back({v.slot, {}});
    }
    trace.slots.back().vehicles.push_back(v);
  }
  for (auto& rec : trace.slots) {
    std::sort(rec.vehicles.begin(), rec.vehicles.end(),
              [](const VehicleState& a, const VehicleState& b) { return a.user_id < b.user_id; });
  }
  return trace;
}

Trace load_trace(const std::filesystem::path& path, double delta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open trace file " + path.string());
  return parse_trace(in, delta);
}

void write_trace(std::ostream& out, const Trace& trace) {
  out << kHeader << '\n';
  for (const auto& rec : trace.slots) {
    for (const auto& v : rec.vehicles) {
      out << v.slot << ',' << v.user_id << ',' << format_double(v.position.x) << ','
          << format_double(v.position.y) << ',' << format_double(v.heading) << ','
          << format_double(v.speed) << '\n';
    }
  }
}

void save_trace(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write trace file " + path.string());
  write_trace(out, trace);
}

std::vector<std::string> check_trace(const Trace& trace, double max_speed) {
  std::vector<std::string> out;
  std::map<int, const VehicleState*> previous;
  for (std::size_t s = 0; s < trace.slots.size(); ++s) {
    const auto& rec = trace.slots[s];
    if (s > 0 && rec.slot != trace.slots[s - 1].slot + 1) {
      out.push_back("slot " + std::to_string(rec.slot) + " does not follow its predecessor");
    }
    std::set<int> ids;
    std::map<int, const VehicleState*> current;
    for (const auto& v : rec.vehicles) {
      if (!ids.insert(v.user_id).second) {
        out.push_back("user " + std::to_string(v.user_id) + " repeated in slot " +
                      std::to_string(rec.slot));
      }
      if (v.speed < 0.0) out.push_back("negative speed for user " + std::to_string(v.user_id));
      if (v.heading < 0.0 || v.heading >= 2.0 * std::numbers::pi) {
        out.push_back("heading not normalized for user " + std::to_string(v.user_id));
      }
      if (auto it = previous.find(v.user_id); it != previous.end()) {
        const double step = norm(v.position - it->second->position);
        if (step > 1.1 * max_speed * trace.delta) {
          out.push_back("user " + std::to_string(v.user_id) + " jumps " + std::to_string(step) +
                        " m in slot " + std::to_string(rec.slot));
        }
      }
      current[v.user_id] = &v;
    }
    previous = std::move(current);
  }
  return out;
}

Trace synth_intersection(const ScenarioConfig& cfg, std::uint64_t seed) {
  if (!(cfg.region.width() > 0.0) || !(cfg.region.height() > 0.0)) {
    throw ConfigError("scenario.region", "dimensions must be positive");
  }
  if (!(cfg.duration > 0.0)) throw ConfigError("scenario.duration", "must be positive");
  if (!(cfg.delta > 0.0)) throw ConfigError("scenario.delta", "must be positive");
  if (!(cfg.max_speed > 0.0)) throw ConfigError("scenario.max_speed", "must be positive");
  if (cfg.lanes_per_direction < 1) throw ConfigError("scenario.lanes_per_direction", "must be >= 1");
  if (!(cfg.lane_width > 0.0)) throw ConfigError("scenario.lane_width", "must be positive");
  if (!(cfg.turn_radius > 0.0)) throw ConfigError("scenario.turn_radius", "must be positive");
  if (cfg.num_vehicles < 0) throw ConfigError("scenario.num_vehicles", "must be >= 0");
  if (!(cfg.min_speed_fraction > 0.0 && cfg.min_speed_fraction <= 1.0)) {
    throw ConfigError("scenario.min_speed_fraction", "must lie in (0, 1]");
  }
  if (cfg.p_left < 0.0 || cfg.p_right < 0.0 || cfg.p_left + cfg.p_right > 1.0) {
    throw ConfigError("scenario.turn_probabilities", "must be non-negative and sum to <= 1");
  }

  const int num_slots = static_cast<int>(std::lround(cfg.duration / cfg.delta));
  Trace trace;
  trace.delta = cfg.delta;
  trace.slots.resize(static_cast<std::size_t>(num_slots));
  for (int s = 0; s < num_slots; ++s) trace.slots[static_cast<std::size_t>(s)].slot = s;

  const double half = 0.5 * std::min(cfg.region.width(), cfg.region.height());
  const Vec2 center = cfg.region.center();
  // Rotation taking the local "enter heading north" frame to each approach arm.
  constexpr std::array<double, 4> arm_rotation{0.0, -std::numbers::pi / 2.0, std::numbers::pi,
                                               std::numbers::pi / 2.0};

  for (int v = 0; v < cfg.num_vehicles; ++v) {
    Rng rng(derive_seed(seed, 0x7472616365ULL, static_cast<std::uint64_t>(v)));
    const double rotation = arm_rotation[rng.below(4)];
    const int lane = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.lanes_per_direction)));
    const double draw = rng.unit();
    Turn intent = draw < cfg.p_left                 ? Turn::Left
                  : draw < cfg.p_left + cfg.p_right ? Turn::Right
                                                    : Turn::Straight;
    if (!cfg.intents.empty()) intent = cfg.intents[static_cast<std::size_t>(v) % cfg.intents.size()];
    const double speed = cfg.max_speed * rng.uniform(cfg.min_speed_fraction, 1.0);

    const LanePath path(half, cfg.lane_width * (lane + 0.5), cfg.turn_radius, intent);
    const int travel_slots = static_cast<int>(std::ceil(path.length() / (speed * cfg.delta)));
    const int latest = std::min(static_cast<int>(std::floor(cfg.spawn_window / cfg.delta)),
                                num_slots - 1 - travel_slots);
    const int spawn = static_cast<int>(rng.between(0, std::max(0, latest)));

    for (int s = spawn; s < num_slots; ++s) {
      const double dist = speed * (s - spawn) * cfg.delta;
      if (dist > path.length()) break;
      const auto [local, local_heading] = path.sample(dist);
      VehicleState state;
      state.user_id = v;
      state.slot = s;
      state.speed = speed;
      state.position = rotate_about(local, {0.0, 0.0}, rotation) + center;
      state.heading = normalize_heading(local_heading + rotation);
      trace.slots[static_cast<std::size_t>(s)].vehicles.push_back(state);
    }
  }
  return trace;
}

}  // namespace qcpto
