#include "specbench/arm_env.hpp"

#include <algorithm>
#include <cmath>

namespace specbench {

namespace {

double dist2(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace

void ArmConfig::validate() const {
  if (!(workspace_half > 0)) throw ConfigError("workspace_half must be positive");
  if (!(region_radius > 0) || region_radius * 2 >= workspace_half) {
    throw ConfigError("region_radius too large for the workspace");
  }
  if (!(max_speed > 0)) throw ConfigError("max_speed must be positive");
  if (horizon < 1) throw ConfigError("horizon must be positive");
}

ArmEnv::ArmEnv(ArmConfig config) : config_(config) {
  config_.validate();
  horizon_ = config_.horizon;
}

std::set<Proposition> ArmEnv::alphabet() const {
  std::set<Proposition> out;
  for (const auto& c : kRegionColors) {
    if (config_.mode == ArmMode::GrippersOnly) {
      out.emplace(c);
    } else {
      out.emplace("g_" + c);
      out.emplace("a_" + c);
    }
  }
  return out;
}

std::vector<std::vector<Proposition>> ArmEnv::exclusive_groups() const {
  std::vector<Proposition> g;
  for (const auto& c : kRegionColors) {
    g.emplace_back(config_.mode == ArmMode::GrippersOnly ? c : "g_" + c);
  }
  return {g};
}

ObservationLayout ArmEnv::layout() const {
  ObservationLayout l;
  std::size_t off = 0;
  for (const auto& c : kRegionColors) {
    l.s_ap.push_back({"ee_range_" + c, off++, 1, "m"});
    l.s_ap.push_back({"ee_bearing_" + c, off, 3, "unit vector"});
    off += 3;
  }
  if (config_.mode == ArmMode::GrippersArm) {
    for (const auto& c : kRegionColors) {
      l.s_ap.push_back({"arm_range_" + c, off++, 1, "m"});
      l.s_ap.push_back({"arm_bearing_" + c, off, 3, "unit vector"});
      off += 3;
    }
  }
  l.s_not_ap.push_back({"ee_position", 0, 3, "m"});
  return l;
}

ResetResult ArmEnv::reset(std::uint64_t seed) {
  Rng placement(mix64(seed, 1));
  const double h = config_.workspace_half;
  const double r = config_.region_radius;
  regions_.clear();
  for (std::size_t c = 0; c < kRegionColors.size(); ++c) {
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
      Vec3 p{placement.uniform(-h + r, h - r), placement.uniform(-h + r, h - r),
             placement.uniform(-h + r, h - r)};
      placed = std::all_of(regions_.begin(), regions_.end(),
                           [&](const Vec3& q) { return dist2(p, q) >= 4 * r * r; });
      if (placed) regions_.push_back(p);
    }
    if (!placed) throw PlacementFailure("arm: could not separate regions after 1000 attempts");
  }
  bool placed = false;
  for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
    ee_ = {placement.uniform(-h, h), placement.uniform(-h, h), placement.uniform(-h, h)};
    placed = labels().empty();
  }
  if (!placed) throw PlacementFailure("arm: no free start pose after 1000 attempts");
  begin_episode();
  return {{observe()}, labels()};
}

void ArmEnv::set_state(std::vector<Vec3> regions, Vec3 ee) {
  regions_ = std::move(regions);
  ee_ = ee;
  begin_episode();
}

StepResult ArmEnv::step(const std::vector<Action>& joint) {
  check_running();
  if (joint.size() != 1 || joint[0].size() != 3) throw ActionOutOfRange("arm: one 3-vector action");
  for (double v : joint[0]) {
    if (!(v >= -1.0 && v <= 1.0)) throw ActionOutOfRange("arm: action entries must lie in [-1, 1]");
  }
  const double h = config_.workspace_half;
  for (std::size_t i = 0; i < 3; ++i) {
    ee_[i] = std::clamp(ee_[i] + joint[0][i] * config_.max_speed, -h, h);
  }
  StepResult r;
  r.obs.push_back(observe());
  r.propositions = labels();
  finish_step(r);
  return r;
}

LabelSet ArmEnv::labels() const {
  LabelSet out;
  const double r = config_.region_radius;
  for (std::size_t c = 0; c < regions_.size(); ++c) {
    const bool grip = dist2(ee_, regions_[c]) <= r * r;
    if (config_.mode == ArmMode::GrippersOnly) {
      if (grip) out.emplace(kRegionColors[c]);
      continue;
    }
    if (grip) out.emplace("g_" + kRegionColors[c]);
    if (segment_intersects_sphere(config_.base, ee_, regions_[c], r)) out.emplace("a_" + kRegionColors[c]);
  }
  return out;
}

Observation ArmEnv::observe() const {
  Observation o;
  for (const auto& center : regions_) {
    auto rb = range_bearing(ee_, center);
    o.s_ap.push_back(rb.distance);
    o.s_ap.insert(o.s_ap.end(), rb.direction.begin(), rb.direction.end());
  }
  if (config_.mode == ArmMode::GrippersArm) {
    for (const auto& center : regions_) {
      auto rb = range_bearing(closest_point_on_segment(config_.base, ee_, center), center);
      o.s_ap.push_back(rb.distance);
      o.s_ap.insert(o.s_ap.end(), rb.direction.begin(), rb.direction.end());
    }
  }
  o.s_not_ap.assign(ee_.begin(), ee_.end());
  return o;
}

nlohmann::json ArmEnv::raw_state() const {
  nlohmann::json regions = nlohmann::json::array();
  for (std::size_t c = 0; c < regions_.size(); ++c) {
    regions.push_back({{"color", kRegionColors[c]},
                       {"center", {regions_[c][0], regions_[c][1], regions_[c][2]}},
                       {"radius", config_.region_radius}});
  }
  return {{"env", id()},
          {"step", step_},
          {"base", {config_.base[0], config_.base[1], config_.base[2]}},
          {"ee", {ee_[0], ee_[1], ee_[2]}},
          {"regions", regions}};
}

}  // namespace specbench
