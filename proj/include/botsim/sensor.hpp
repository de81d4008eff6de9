#pragma once

#include <cstdint>

#include "botsim/geometry.hpp"
#include "botsim/world.hpp"

namespace botsim {

// Ultrasonic envelope (HC-SR04 class): readings live in [5, 450] cm.
inline constexpr double kMinRange = 5.0;
inline constexpr double kMaxRange = 450.0;

inline constexpr double kBeamHalfAngle = 7.5 * kPi / 180.0;

struct ScanVector {
  double front{kMaxRange};
  double back{kMaxRange};
  double left{kMaxRange};
  double right{kMaxRange};

  // Channel order used everywhere a feature index appears.
  double channel(int i) const {
    switch (i) {
      case 0: return front;
      case 1: return back;
      case 2: return left;
      case 3: return right;
    }
    return front;
  }
  void set_channel(int i, double v) {
    switch (i) {
      case 0: front = v; return;
      case 1: back = v; return;
      case 2: left = v; return;
      case 3: right = v; return;
    }
  }
};

inline constexpr int kNumSensors = 4;

struct NoiseSpec {
  double sigma{0.5};  // cm, zero-mean additive
  uint64_t seed{0};
};

// Distance to the nearest obstacle or bounds wall along the ray, clamped to
// [kMinRange, max_range]; max_range when nothing is hit.
double raycast(const WorldSpec& world, const Vec2& origin, double bearing,
               double max_range = kMaxRange);

// Per mount: three rays across the beam cone, minimum taken, noise added,
// result clamped to the envelope. With sigma == 0 this is a pure function of
// the geometry; otherwise the noise stream is keyed by (seed, tick, sensor)
// so an episode replays exactly.
ScanVector sense(const WorldSpec& world, const Pose& pose, const RobotSpec& robot,
                 const NoiseSpec& noise, long tick);

}  // namespace botsim
