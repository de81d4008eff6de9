#include "botsim/sensor.hpp"

#include <algorithm>
#include <cmath>

#include "botsim/rng.hpp"

namespace botsim {

double raycast(const WorldSpec& world, const Vec2& origin, double bearing,
               double max_range) {
  Vec2 d = unit(bearing);
  double best = ray_rect(origin, d, world.bounds);
  for (const auto& poly : world.static_obstacles) {
    size_t n = poly.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
      best = std::min(best, ray_segment(origin, d, poly[j], poly[i]));
    }
  }
  for (const auto& mob : world.mobile_obstacles) {
    size_t n = mob.shape.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
      best = std::min(best, ray_segment(origin, d, mob.shape[j], mob.shape[i]));
    }
  }
  if (!std::isfinite(best) || best > max_range) return max_range;
  return std::max(best, kMinRange);
}

ScanVector sense(const WorldSpec& world, const Pose& pose, const RobotSpec& robot,
                 const NoiseSpec& noise, long tick) {
  ScanVector scan;
  for (int i = 0; i < kNumSensors; ++i) {
    const SensorMount& m = robot.sensors.mount(i);
    double mount_bearing = pose.heading + m.bearing;
    Vec2 origin = pose.position + m.offset * unit(mount_bearing);
    double reading = kMaxRange;
    for (double off : {-kBeamHalfAngle, 0.0, kBeamHalfAngle}) {
      reading = std::min(reading, raycast(world, origin, mount_bearing + off));
    }
    if (noise.sigma != 0.0) {
      Rng rng(mix_seed(noise.seed, static_cast<uint64_t>(tick),
                       static_cast<uint64_t>(i)));
      reading += rng.normal(noise.sigma);
    }
    scan.set_channel(i, std::clamp(reading, kMinRange, kMaxRange));
  }
  return scan;
}

}  // namespace botsim
