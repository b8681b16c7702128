#pragma once

#include <array>
#include <optional>
#include <vector>

namespace specbench {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

using Vec3 = std::array<double, 3>;

struct Disc {
  Vec2 center;
  double radius = 0.0;
};

/// Distance along the unit ray p + t·u (t >= 0) to the first point of the
/// disc; 0 when p is inside, nullopt when the ray misses.
std::optional<double> ray_disc_distance(Vec2 p, Vec2 u, const Disc& d);

/// `bins` readings; bin k looks along heading + (k + 0.5)·2π/bins and reads
/// 1 - min(d, range)/range for the nearest disc hit, 0 when none.
std::vector<double> lidar_scan(Vec2 pos, double heading, const std::vector<Disc>& discs, int bins,
                               double range);

struct RangeBearing {
  double distance = 0.0;
  Vec3 direction{};
};

/// Distance and unit direction from `from` to `to`; zero direction when the
/// points are closer than 1e-9.
RangeBearing range_bearing(const Vec3& from, const Vec3& to);

/// Closest point to `c` on the segment [a, b].
Vec3 closest_point_on_segment(const Vec3& a, const Vec3& b, const Vec3& c);
bool segment_intersects_sphere(const Vec3& a, const Vec3& b, const Vec3& center, double radius);

/// Moves a point with velocity v for dt inside [-limit, limit]^2 with
/// specular reflection at the bounds.
void advance_reflecting(Vec2& pos, Vec2& vel, double dt, double limit);

}  // namespace specbench
