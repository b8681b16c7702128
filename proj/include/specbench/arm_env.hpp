#pragma once

#include "specbench/env.hpp"
#include "specbench/geometry.hpp"
#include "specbench/rng.hpp"

namespace specbench {

enum class ArmMode { GrippersOnly, GrippersArm };

struct ArmConfig {
  double workspace_half = 0.5;  // box [-h, h]^3
  Vec3 base{0.0, 0.0, -0.5};
  double region_radius = 0.08;
  double max_speed = 0.05;  // m per step
  std::size_t horizon = 200;
  ArmMode mode = ArmMode::GrippersOnly;

  void validate() const;
};

inline const std::array<std::string, 4> kRegionColors{"b", "g", "m", "y"};

/// End-effector reaching among four colored spheres. The arm body is the
/// segment from the base to the end effector.
///
/// GrippersOnly props: b g m y (end effector inside the sphere).
/// GrippersArm props: g_c (end effector) and a_c (arm segment) per color.
/// s_ap: per region distance and unit direction from the end effector; in
/// GrippersArm mode also from the closest arm point. s_not_ap: ee position.
class ArmEnv : public Env {
 public:
  explicit ArmEnv(ArmConfig config = {});

  std::string id() const override {
    return config_.mode == ArmMode::GrippersArm ? "arm-full" : "arm-grippers";
  }
  std::set<Proposition> alphabet() const override;
  ActionSpace action_space() const override { return {0, 3}; }
  ObservationLayout layout() const override;
  ResetResult reset(std::uint64_t seed) override;
  StepResult step(const std::vector<Action>& joint) override;
  using Env::step;
  std::vector<std::vector<Proposition>> exclusive_groups() const override;
  nlohmann::json raw_state() const override;
  LabelSet labels() const override;

  const ArmConfig& config() const noexcept { return config_; }
  const std::vector<Vec3>& regions() const noexcept { return regions_; }
  const Vec3& end_effector() const noexcept { return ee_; }
  void set_state(std::vector<Vec3> regions, Vec3 ee);

 private:
  Observation observe() const;

  ArmConfig config_;
  std::vector<Vec3> regions_;
  Vec3 ee_{};
};

}  // namespace specbench
