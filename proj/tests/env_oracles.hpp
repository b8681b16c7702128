#pragma once
// Label recomputation from raw-state dumps with geometry written
// independently of the environment code.

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <json.hpp>

#include "specbench/env.hpp"

namespace oracle {

inline specbench::LabelSet labels_from_raw(const nlohmann::json& raw) {
  specbench::LabelSet out;
  const std::string env = raw.at("env");
  if (env == "letter") {
    int ar = raw.at("agent").at(0), ac = raw.at("agent").at(1);
    for (const auto& [name, cells] : raw.at("letters").items()) {
      for (const auto& c : cells) {
        if (c.at(0) == ar && c.at(1) == ac) out.emplace(name);
      }
    }
    return out;
  }
  if (env.rfind("zone", 0) == 0) {
    const auto& agents = raw.at("agents");
    const bool multi = agents.size() > 1;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      for (const auto& z : raw.at("zones")) {
        double d = std::hypot(agents[i].at("x").get<double>() - z.at("x").get<double>(),
                              agents[i].at("y").get<double>() - z.at("y").get<double>());
        if (d <= z.at("radius").get<double>()) {
          std::string name = z.at("color");
          out.emplace(multi ? name + "_" + std::to_string(i) : name);
        }
      }
    }
    return out;
  }
  // arm: solve |a + t(b - a) - c|^2 = r^2 for t in [0, 1]
  const bool full = env == "arm-full";
  auto v = [](const nlohmann::json& j) {
    return std::array<double, 3>{j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
  };
  auto a = v(raw.at("base"));
  auto b = v(raw.at("ee"));
  for (const auto& reg : raw.at("regions")) {
    auto c = v(reg.at("center"));
    double r = reg.at("radius");
    std::string color = reg.at("color");
    double de = std::sqrt((b[0] - c[0]) * (b[0] - c[0]) + (b[1] - c[1]) * (b[1] - c[1]) +
                          (b[2] - c[2]) * (b[2] - c[2]));
    bool grip = de <= r;
    if (!full) {
      if (grip) out.emplace(color);
      continue;
    }
    if (grip) out.emplace("g_" + color);
    double dx[3], f[3];
    for (int k = 0; k < 3; ++k) {
      dx[k] = b[k] - a[k];
      f[k] = a[k] - c[k];
    }
    double qa = dx[0] * dx[0] + dx[1] * dx[1] + dx[2] * dx[2];
    double qb = 2 * (f[0] * dx[0] + f[1] * dx[1] + f[2] * dx[2]);
    double qc = f[0] * f[0] + f[1] * f[1] + f[2] * f[2] - r * r;
    bool hit = qc <= 0 || grip;
    double disc = qb * qb - 4 * qa * qc;
    if (!hit && disc >= 0 && qa > 0) {
      double t1 = (-qb - std::sqrt(disc)) / (2 * qa);
      double t2 = (-qb + std::sqrt(disc)) / (2 * qa);
      hit = (t1 >= 0 && t1 <= 1) || (t2 >= 0 && t2 <= 1) || (t1 < 0 && t2 > 1);
    }
    if (hit) out.emplace("a_" + color);
  }
  return out;
}

/// Random action within the env's action space.
inline specbench::Action random_action(std::mt19937_64& rng, const specbench::ActionSpace& space) {
  if (space.discrete > 0) return {static_cast<double>(rng() % static_cast<unsigned>(space.discrete))};
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  specbench::Action a;
  for (int i = 0; i < space.dim; ++i) a.push_back(u(rng));
  return a;
}

/// Drives `env` with random actions for `steps` steps (resetting at episode
/// ends) and returns the number of label mismatches against the raw dump.
inline std::size_t label_soundness(specbench::Env& env, std::size_t steps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t mismatches = 0;
  std::uint64_t episode = 0;
  auto r = env.reset(seed);
  if (labels_from_raw(env.raw_state()) != r.propositions) ++mismatches;
  for (std::size_t i = 0; i < steps; ++i) {
    if (env.done()) env.reset(seed + ++episode);
    std::vector<specbench::Action> joint;
    for (std::size_t k = 0; k < env.n_agents(); ++k) joint.push_back(random_action(rng, env.action_space()));
    auto s = env.step(joint);
    if (labels_from_raw(env.raw_state()) != s.propositions) ++mismatches;
  }
  return mismatches;
}

/// Ray-disc hit distance via the perpendicular foot of the center.
inline double lidar_reading(double px, double py, double angle, double cx, double cy, double r,
                            double range) {
  double ux = std::cos(angle), uy = std::sin(angle);
  double along = (cx - px) * ux + (cy - py) * uy;
  double perp = std::abs((cx - px) * uy - (cy - py) * ux);
  double center_dist = std::hypot(cx - px, cy - py);
  if (center_dist <= r) return 1.0;
  if (perp > r || along < 0) return 0.0;
  double d = along - std::sqrt(r * r - perp * perp);
  if (d < 0) return 0.0;
  return d >= range ? 0.0 : 1.0 - d / range;
}

}  // namespace oracle
