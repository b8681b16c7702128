#include "specbench/env.hpp"

#include "specbench/arm_env.hpp"
#include "specbench/letter_world.hpp"
#include "specbench/zone_env.hpp"

namespace specbench {

std::size_t ObservationLayout::s_ap_size() const {
  std::size_t n = 0;
  for (const auto& s : s_ap) n += s.size;
  return n;
}

std::size_t ObservationLayout::s_not_ap_size() const {
  std::size_t n = 0;
  for (const auto& s : s_not_ap) n += s.size;
  return n;
}

void Env::finish_step(StepResult& r) {
  ++step_;
  r.step = step_;
  if (step_ >= horizon_) {
    r.timeout = true;
    done_ = true;
  }
  if (r.terminal) done_ = true;
}

void Env::check_running() const {
  if (done_) throw SteppedAfterTerminal(id() + ": step called on a finished episode; call reset");
}

namespace {

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known) {
  if (j.is_null()) return;
  if (!j.is_object()) throw ConfigError("config overrides must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError("unknown config field '" + key + "'");
  }
}

ZoneConfig zone_config(const nlohmann::json& o, ZoneConfig c) {
  reject_unknown(o, {"world_half_extent", "zones_per_color", "zone_radius", "lidar_bins",
                     "lidar_range", "dt", "horizon", "dynamic_zones", "zone_speed", "n_agents",
                     "robot"});
  read_field(o, "world_half_extent", c.world_half_extent);
  read_field(o, "zones_per_color", c.zones_per_color);
  read_field(o, "zone_radius", c.zone_radius);
  read_field(o, "lidar_bins", c.lidar_bins);
  read_field(o, "lidar_range", c.lidar_range);
  read_field(o, "dt", c.dt);
  read_field(o, "horizon", c.horizon);
  read_field(o, "dynamic_zones", c.dynamic_zones);
  read_field(o, "zone_speed", c.zone_speed);
  read_field(o, "n_agents", c.n_agents);
  if (o.contains("robot")) {
    std::string r;
    read_field(o, "robot", r);
    if (r == "point") {
      c.robot = Robot::Point;
    } else if (r == "car") {
      c.robot = Robot::Car;
    } else {
      throw ConfigError("robot must be 'point' or 'car'");
    }
  }
  return c;
}

}  // namespace

std::vector<std::string> env_ids() {
  return {"letter", "zone-point", "zone-car", "zone-multi", "arm-grippers", "arm-full"};
}

std::unique_ptr<Env> make_env(const std::string& id, const nlohmann::json& overrides) {
  if (id == "letter") {
    reject_unknown(overrides,
                   {"grid_size", "n_letters", "copies_per_letter", "horizon", "partial_obs",
                    "view_radius"});
    LetterWorldConfig c;
    read_field(overrides, "grid_size", c.grid_size);
    read_field(overrides, "n_letters", c.n_letters);
    read_field(overrides, "copies_per_letter", c.copies_per_letter);
    read_field(overrides, "horizon", c.horizon);
    read_field(overrides, "partial_obs", c.partial_obs);
    read_field(overrides, "view_radius", c.view_radius);
    return std::make_unique<LetterWorld>(c);
  }
  if (id == "zone-point" || id == "zone-car" || id == "zone-multi") {
    ZoneConfig base;
    base.robot = id == "zone-car" ? Robot::Car : Robot::Point;
    if (id == "zone-multi") base.n_agents = 2;
    auto c = zone_config(overrides, base);
    if (id != "zone-multi" && c.n_agents != 1) {
      throw ConfigError(id + " is single-agent; use zone-multi");
    }
    if (id == "zone-multi" && c.n_agents < 2) throw ConfigError("zone-multi needs n_agents >= 2");
    return std::make_unique<ZoneEnv>(c);
  }
  if (id == "arm-grippers" || id == "arm-full") {
    reject_unknown(overrides, {"horizon", "region_radius", "max_speed"});
    ArmConfig c;
    c.mode = id == "arm-full" ? ArmMode::GrippersArm : ArmMode::GrippersOnly;
    read_field(overrides, "horizon", c.horizon);
    read_field(overrides, "region_radius", c.region_radius);
    read_field(overrides, "max_speed", c.max_speed);
    return std::make_unique<ArmEnv>(c);
  }
  throw ConfigError("unknown environment id '" + id + "'");
}

}  // namespace specbench
