#include "specbench/zone_env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace specbench {

void ZoneConfig::validate() const {
  if (!(world_half_extent > 0)) throw ConfigError("world_half_extent must be positive");
  if (zones_per_color < 0) throw ConfigError("zones_per_color must be non-negative");
  if (!(zone_radius > 0) || zone_radius >= world_half_extent) {
    throw ConfigError("zone_radius must be in (0, world_half_extent)");
  }
  if (lidar_bins < 1) throw ConfigError("lidar_bins must be positive");
  if (!(lidar_range > 0)) throw ConfigError("lidar_range must be positive");
  if (!(dt > 0)) throw ConfigError("dt must be positive");
  if (horizon < 1) throw ConfigError("horizon must be positive");
  if (dynamic_zones < 0 || dynamic_zones > 4 * zones_per_color) {
    throw ConfigError("dynamic_zones must be between 0 and the number of zones");
  }
  if (zone_speed < 0) throw ConfigError("zone_speed must be non-negative");
  if (n_agents < 1) throw ConfigError("n_agents must be positive");
}

void advance_dynamic_zones(std::vector<Zone>& zones, double dt, double half_extent, double radius) {
  for (auto& z : zones) {
    if (z.dynamic) advance_reflecting(z.center, z.velocity, dt, half_extent - radius);
  }
}

ZoneEnv::ZoneEnv(ZoneConfig config) : config_(config) {
  config_.validate();
  horizon_ = config_.horizon;
}

std::string ZoneEnv::id() const {
  if (config_.n_agents > 1) return "zone-multi";
  return config_.robot == Robot::Car ? "zone-car" : "zone-point";
}

std::string ZoneEnv::prop_name(int color, int agent) const {
  const auto& c = kZoneColors[static_cast<std::size_t>(color)];
  return config_.n_agents > 1 ? c + "_" + std::to_string(agent) : c;
}

std::set<Proposition> ZoneEnv::alphabet() const {
  std::set<Proposition> out;
  for (int i = 0; i < config_.n_agents; ++i) {
    for (int c = 0; c < 4; ++c) out.emplace(prop_name(c, i));
  }
  return out;
}

std::vector<std::vector<Proposition>> ZoneEnv::exclusive_groups() const {
  if (config_.dynamic_zones > 0) return {};
  std::vector<std::vector<Proposition>> out;
  for (int i = 0; i < config_.n_agents; ++i) {
    std::vector<Proposition> g;
    for (int c = 0; c < 4; ++c) g.emplace_back(prop_name(c, i));
    out.push_back(std::move(g));
  }
  return out;
}

ObservationLayout ZoneEnv::layout() const {
  ObservationLayout l;
  const auto b = static_cast<std::size_t>(config_.lidar_bins);
  std::size_t off = 0;
  for (const auto& c : kZoneColors) {
    l.s_ap.push_back({"lidar_" + c, off, b, "proximity in [0,1]"});
    off += b;
  }
  if (config_.n_agents > 1) l.s_ap.push_back({"lidar_agents", off, b, "proximity in [0,1]"});
  l.s_not_ap = {{"x", 0, 1, "m"},          {"y", 1, 1, "m"},
                {"cos_heading", 2, 1, ""}, {"sin_heading", 3, 1, ""},
                {"speed", 4, 1, "m/s"},    {"turn_rate", 5, 1, "rad/s"}};
  return l;
}

ResetResult ZoneEnv::reset(std::uint64_t seed) {
  Rng placement(mix64(seed, 1));
  Rng dynamics(mix64(seed, 2));
  const double r = config_.zone_radius;
  const double ext = config_.world_half_extent;
  zones_.clear();
  for (int c = 0; c < 4; ++c) {
    for (int k = 0; k < config_.zones_per_color; ++k) {
      bool placed = false;
      for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
        Vec2 p{placement.uniform(-ext + r, ext - r), placement.uniform(-ext + r, ext - r)};
        placed = std::all_of(zones_.begin(), zones_.end(), [&](const Zone& z) {
          return std::hypot(z.center.x - p.x, z.center.y - p.y) >= 2 * r;
        });
        if (placed) zones_.push_back({c, p, {}, false});
      }
      if (!placed) throw PlacementFailure("zone: could not separate zones after 1000 attempts");
    }
  }
  for (int i = 0; i < config_.dynamic_zones; ++i) {
    auto& z = zones_[static_cast<std::size_t>(i)];
    const double angle = dynamics.uniform(0.0, 2.0 * std::numbers::pi);
    z.dynamic = true;
    z.velocity = {config_.zone_speed * std::cos(angle), config_.zone_speed * std::sin(angle)};
  }
  agents_.clear();
  for (int i = 0; i < config_.n_agents; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
      Vec2 p{placement.uniform(-ext, ext), placement.uniform(-ext, ext)};
      placed = std::all_of(zones_.begin(), zones_.end(), [&](const Zone& z) {
        return std::hypot(z.center.x - p.x, z.center.y - p.y) > r;
      });
      if (placed) agents_.push_back({p, placement.uniform(-std::numbers::pi, std::numbers::pi), 0, 0});
    }
    if (!placed) throw PlacementFailure("zone: no free spawn point after 1000 attempts");
  }
  begin_episode();
  ResetResult out;
  for (std::size_t i = 0; i < agents_.size(); ++i) out.obs.push_back(observe(i));
  out.propositions = labels();
  return out;
}

void ZoneEnv::set_state(std::vector<Zone> zones, std::vector<ZoneAgent> agents) {
  if (agents.size() != static_cast<std::size_t>(config_.n_agents)) {
    throw ConfigError("set_state: agent count does not match the config");
  }
  zones_ = std::move(zones);
  agents_ = std::move(agents);
  begin_episode();
}

StepResult ZoneEnv::step(const std::vector<Action>& joint) {
  check_running();
  if (joint.size() != agents_.size()) throw ActionOutOfRange("zone: one action per agent required");
  for (const auto& a : joint) {
    if (a.size() != 2) throw ActionOutOfRange("zone: actions have two entries");
    for (double v : a) {
      if (!(v >= -1.0 && v <= 1.0)) throw ActionOutOfRange("zone: action entries must lie in [-1, 1]");
    }
  }
  const double ext = config_.world_half_extent;
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    auto& ag = agents_[i];
    const auto& a = joint[i];
    double v, w;
    if (config_.robot == Robot::Point) {
      w = a[0] * config_.max_turn_rate;
      v = a[1] * config_.max_speed;
    } else {
      v = (a[0] + a[1]) / 2.0 * config_.max_speed;
      w = (a[1] - a[0]) / config_.track * config_.max_speed;
    }
    ag.heading = std::remainder(ag.heading + w * config_.dt, 2.0 * std::numbers::pi);
    ag.pos.x = std::clamp(ag.pos.x + v * config_.dt * std::cos(ag.heading), -ext, ext);
    ag.pos.y = std::clamp(ag.pos.y + v * config_.dt * std::sin(ag.heading), -ext, ext);
    ag.speed = v;
    ag.turn_rate = w;
  }
  advance_dynamic_zones(zones_, config_.dt, ext, config_.zone_radius);
  StepResult r;
  for (std::size_t i = 0; i < agents_.size(); ++i) r.obs.push_back(observe(i));
  r.propositions = labels();
  finish_step(r);
  return r;
}

LabelSet ZoneEnv::labels() const {
  LabelSet out;
  const double r2 = config_.zone_radius * config_.zone_radius;
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    for (const auto& z : zones_) {
      const double dx = agents_[i].pos.x - z.center.x, dy = agents_[i].pos.y - z.center.y;
      if (dx * dx + dy * dy <= r2) out.emplace(prop_name(z.color, static_cast<int>(i)));
    }
  }
  return out;
}

Observation ZoneEnv::observe(std::size_t agent) const {
  Observation o;
  const auto& ag = agents_[agent];
  for (int c = 0; c < 4; ++c) {
    std::vector<Disc> discs;
    for (const auto& z : zones_) {
      if (z.color == c) discs.push_back({z.center, config_.zone_radius});
    }
    auto scan = lidar_scan(ag.pos, ag.heading, discs, config_.lidar_bins, config_.lidar_range);
    o.s_ap.insert(o.s_ap.end(), scan.begin(), scan.end());
  }
  if (config_.n_agents > 1) {
    std::vector<Disc> others;
    for (std::size_t j = 0; j < agents_.size(); ++j) {
      if (j != agent) others.push_back({agents_[j].pos, config_.agent_radius});
    }
    auto scan = lidar_scan(ag.pos, ag.heading, others, config_.lidar_bins, config_.lidar_range);
    o.s_ap.insert(o.s_ap.end(), scan.begin(), scan.end());
  }
  o.s_not_ap = {ag.pos.x, ag.pos.y, std::cos(ag.heading), std::sin(ag.heading), ag.speed, ag.turn_rate};
  return o;
}

nlohmann::json ZoneEnv::raw_state() const {
  nlohmann::json agents = nlohmann::json::array();
  for (const auto& a : agents_) {
    agents.push_back({{"x", a.pos.x}, {"y", a.pos.y}, {"heading", a.heading}});
  }
  nlohmann::json zones = nlohmann::json::array();
  for (const auto& z : zones_) {
    zones.push_back({{"color", kZoneColors[static_cast<std::size_t>(z.color)]},
                     {"x", z.center.x},
                     {"y", z.center.y},
                     {"vx", z.velocity.x},
                     {"vy", z.velocity.y},
                     {"radius", config_.zone_radius},
                     {"dynamic", z.dynamic}});
  }
  return {{"env", id()},
          {"step", step_},
          {"world_half_extent", config_.world_half_extent},
          {"agents", agents},
          {"zones", zones}};
}

}  // namespace specbench
