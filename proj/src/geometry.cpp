#include "specbench/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace specbench {

std::optional<double> ray_disc_distance(Vec2 p, Vec2 u, const Disc& d) {
  const double cx = d.center.x - p.x;
  const double cy = d.center.y - p.y;
  const double c2 = cx * cx + cy * cy - d.radius * d.radius;
  if (c2 <= 0.0) return 0.0;
  const double b = cx * u.x + cy * u.y;
  const double disc = b * b - c2;
  if (disc < 0.0) return std::nullopt;
  const double t = b - std::sqrt(disc);
  if (t < 0.0) return std::nullopt;
  return t;
}

std::vector<double> lidar_scan(Vec2 pos, double heading, const std::vector<Disc>& discs, int bins,
                               double range) {
  std::vector<double> out(static_cast<std::size_t>(bins), 0.0);
  const double sector = 2.0 * std::numbers::pi / bins;
  for (int k = 0; k < bins; ++k) {
    const double angle = heading + (k + 0.5) * sector;
    const Vec2 u{std::cos(angle), std::sin(angle)};
    std::optional<double> best;
    for (const auto& d : discs) {
      auto t = ray_disc_distance(pos, u, d);
      if (t && (!best || *t < *best)) best = t;
    }
    if (best) out[static_cast<std::size_t>(k)] = 1.0 - std::min(*best, range) / range;
  }
  return out;
}

RangeBearing range_bearing(const Vec3& from, const Vec3& to) {
  RangeBearing rb;
  const Vec3 d{to[0] - from[0], to[1] - from[1], to[2] - from[2]};
  rb.distance = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
  if (rb.distance < 1e-9) return rb;
  for (int i = 0; i < 3; ++i) rb.direction[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(i)] / rb.distance;
  return rb;
}

Vec3 closest_point_on_segment(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const double len2 = ab[0] * ab[0] + ab[1] * ab[1] + ab[2] * ab[2];
  double t = 0.0;
  if (len2 > 0.0) {
    t = ((c[0] - a[0]) * ab[0] + (c[1] - a[1]) * ab[1] + (c[2] - a[2]) * ab[2]) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  return {a[0] + t * ab[0], a[1] + t * ab[1], a[2] + t * ab[2]};
}

bool segment_intersects_sphere(const Vec3& a, const Vec3& b, const Vec3& center, double radius) {
  const Vec3 p = closest_point_on_segment(a, b, center);
  const double dx = p[0] - center[0], dy = p[1] - center[1], dz = p[2] - center[2];
  return dx * dx + dy * dy + dz * dz <= radius * radius;
}

void advance_reflecting(Vec2& pos, Vec2& vel, double dt, double limit) {
  auto axis = [&](double& x, double& v) {
    x += v * dt;
    if (x > limit) {
      x = 2.0 * limit - x;
      v = -v;
    } else if (x < -limit) {
      x = -2.0 * limit - x;
      v = -v;
    }
  };
  axis(pos.x, vel.x);
  axis(pos.y, vel.y);
}

}  // namespace specbench
