#pragma once

#include "specbench/env.hpp"
#include "specbench/geometry.hpp"
#include "specbench/rng.hpp"

namespace specbench {

enum class Robot { Point, Car };

struct ZoneConfig {
  double world_half_extent = 2.5;
  int zones_per_color = 2;
  double zone_radius = 0.3;
  Robot robot = Robot::Point;
  int lidar_bins = 16;
  double lidar_range = 3.0;
  double dt = 0.1;
  std::size_t horizon = 1000;
  /// The first `dynamic_zones` zones (color-major order) move.
  int dynamic_zones = 0;
  double zone_speed = 0.2;
  int n_agents = 1;

  double max_turn_rate = 2.0;  // rad/s, Point
  double max_speed = 1.0;      // m/s
  double track = 0.2;          // m, Car wheel separation
  double agent_radius = 0.1;   // m, other agents as seen by LiDAR

  void validate() const;
};

inline const std::array<std::string, 4> kZoneColors{"b", "g", "m", "y"};

struct Zone {
  int color = 0;
  Vec2 center;
  Vec2 velocity;
  bool dynamic = false;
};

struct ZoneAgent {
  Vec2 pos;
  double heading = 0.0;
  double speed = 0.0;
  double turn_rate = 0.0;
};

/// Planar navigation among colored discs. Point: (turn, forward); Car:
/// (left wheel, right wheel); both in [-1, 1]. Positions clamp at the walls.
///
/// s_ap: per-color LiDAR (b, g, m, y, then other agents when n_agents > 1).
/// s_not_ap: x, y, cos heading, sin heading, speed, turn rate.
class ZoneEnv : public Env {
 public:
  explicit ZoneEnv(ZoneConfig config = {});

  std::string id() const override;
  std::set<Proposition> alphabet() const override;
  std::size_t n_agents() const override { return static_cast<std::size_t>(config_.n_agents); }
  ActionSpace action_space() const override { return {0, 2}; }
  ObservationLayout layout() const override;
  ResetResult reset(std::uint64_t seed) override;
  StepResult step(const std::vector<Action>& joint) override;
  using Env::step;
  std::vector<std::vector<Proposition>> exclusive_groups() const override;
  nlohmann::json raw_state() const override;
  LabelSet labels() const override;

  const ZoneConfig& config() const noexcept { return config_; }
  const std::vector<Zone>& zones() const noexcept { return zones_; }
  const std::vector<ZoneAgent>& agents() const noexcept { return agents_; }
  /// Proposition name for a color seen by an agent (`b` or `b_0`).
  std::string prop_name(int color, int agent) const;

  /// Test hook: replace the sampled layout.
  void set_state(std::vector<Zone> zones, std::vector<ZoneAgent> agents);

 private:
  Observation observe(std::size_t agent) const;

  ZoneConfig config_;
  std::vector<Zone> zones_;
  std::vector<ZoneAgent> agents_;
};

/// Moves every dynamic zone one step with reflection at the world bounds
/// (shrunk by the zone radius). Static zones are left unchanged.
void advance_dynamic_zones(std::vector<Zone>& zones, double dt, double half_extent, double radius);

}  // namespace specbench
